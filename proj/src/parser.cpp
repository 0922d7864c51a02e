#include <jetad/parser.hpp>
#include <jetad/primops.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>
#include <utility>

namespace jetad {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
      column_(column)
{}

namespace {

constexpr std::array keywords{"fun", "match", "with", "inj",  "case", "of", "nil", "cons",  "fold",
                              "over", "from", "let",  "in",   "real", "list", "op", "deriv"};

bool is_keyword(std::string_view s)
{
    for (auto k : keywords)
        if (s == k) return true;
    return false;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool ident_char(char c, bool allow_reserved)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || (allow_reserved && c == '%');
}

std::vector<Token> tokenize(std::string_view src, bool allow_reserved)
{
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t m = 0; m < n; ++m) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j], allow_reserved)) ++j;
            if (j < src.size() && src[j] == '%')
                throw ParseError("'%' is reserved for generated names", line, col + (j - i));
            tok.text = std::string(src.substr(i, j - i));
            tok.kind = is_keyword(tok.text) ? Token::Kind::keyword : Token::Kind::identifier;
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            auto digits = [&] {
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            };
            digits();
            if (j < src.size() && src[j] == '.') {
                ++j;
                digits();
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    j = k;
                    digits();
                }
            }
            tok.kind = Token::Kind::number;
            tok.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            tok.kind = Token::Kind::symbol;
            tok.text = "->";
            advance(2);
        } else if (std::string_view("()<>[],:|*+-=/").find(c) != std::string_view::npos) {
            tok.kind = Token::Kind::symbol;
            tok.text = std::string(1, c);
            advance(1);
        } else if (c == '%') {
            throw ParseError("'%' is reserved for generated names", line, col);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

std::string describe(const Token& t)
{
    if (t.kind == Token::Kind::end) return "end of input";
    return "'" + t.text + "'";
}

} // namespace

struct Parser::Impl
{
    std::vector<Token> tokens;
    std::size_t pos = 0;
    const Registry* registry = nullptr;
    std::set<std::string, std::less<>> extra_ops;

    bool is_op(std::string_view name) const { return registry->contains(name) || extra_ops.contains(name); }
};

Parser::Parser(std::string_view source, ParseOptions options) : impl_(std::make_shared<Impl>())
{
    impl_->tokens = tokenize(source, options.allow_reserved);
    impl_->registry = options.registry ? options.registry : &default_registry();
}

const Token& Parser::peek(std::size_t ahead) const
{
    auto i = std::min(impl_->pos + ahead, impl_->tokens.size() - 1);
    return impl_->tokens[i];
}

bool Parser::at_end() const { return peek().kind == Token::Kind::end; }

void Parser::fail(const std::string& message) const { throw ParseError(message, peek().line, peek().column); }

bool Parser::accept_keyword(std::string_view keyword)
{
    if (peek().kind == Token::Kind::keyword && peek().text == keyword) {
        ++impl_->pos;
        return true;
    }
    return false;
}

bool Parser::accept_symbol(std::string_view symbol)
{
    if (peek().kind == Token::Kind::symbol && peek().text == symbol) {
        ++impl_->pos;
        return true;
    }
    return false;
}

void Parser::expect_symbol(std::string_view symbol)
{
    if (!accept_symbol(symbol)) fail("expected '" + std::string(symbol) + "', found " + describe(peek()));
}

void Parser::expect_keyword(std::string_view keyword)
{
    if (!accept_keyword(keyword)) fail("expected '" + std::string(keyword) + "', found " + describe(peek()));
}

std::string Parser::expect_identifier()
{
    if (peek().kind != Token::Kind::identifier) fail("expected identifier, found " + describe(peek()));
    return impl_->tokens[impl_->pos++].text;
}

std::string Parser::expect_digits()
{
    const auto& t = peek();
    if (t.kind != Token::Kind::number || t.text.find_first_not_of("0123456789") != std::string::npos)
        fail("expected digits, found " + describe(t));
    return impl_->tokens[impl_->pos++].text;
}

void Parser::expect_end()
{
    if (!at_end()) fail("unexpected " + describe(peek()));
}

Token Parser::advance()
{
    Token t = peek();
    if (t.kind != Token::Kind::end) ++impl_->pos;
    return t;
}

void Parser::declare_op(std::string name) { impl_->extra_ops.insert(std::move(name)); }

// ---------------------------------------------------------------------------
// types
// ---------------------------------------------------------------------------

namespace {

struct TypeParser
{
    Parser& p;

    Type full()
    {
        Type dom = atom();
        if (p.accept_symbol("->")) return Type::function(dom, full());
        return dom;
    }

    Type atom()
    {
        if (p.accept_keyword("real")) return Type::real();
        if (p.accept_keyword("list")) return Type::list(atom());
        if (p.accept_symbol("(")) {
            Type first = full();
            if (p.accept_symbol(")")) return first;
            p.expect_symbol("*");
            std::vector<Type> comps{first};
            if (!p.accept_symbol(")")) {
                comps.push_back(full());
                while (p.accept_symbol("*")) comps.push_back(full());
                p.expect_symbol(")");
            }
            return Type::product(std::move(comps));
        }
        if (p.accept_symbol("[")) {
            std::vector<std::pair<std::string, Type>> ctors;
            std::set<std::string> seen;
            do {
                auto name = p.expect_identifier();
                if (!seen.insert(name).second) p.fail("duplicate constructor '" + name + "'");
                p.expect_symbol(":");
                ctors.emplace_back(name, full());
            } while (p.accept_symbol("|"));
            p.expect_symbol("]");
            return Type::variant(std::move(ctors));
        }
        p.fail("expected a type, found " + describe(p.peek()));
    }
};

} // namespace

Type Parser::type() { return TypeParser{*this}.full(); }

// ---------------------------------------------------------------------------
// terms
// ---------------------------------------------------------------------------

namespace {

struct TermParser
{
    Parser& p;
    const std::function<bool(std::string_view)>& is_op;

    // Annotations are atomic types; function types need parentheses.
    std::optional<Type> annotation()
    {
        if (p.accept_symbol(":")) return TypeParser{p}.atom();
        return std::nullopt;
    }

    Term open()
    {
        if (p.accept_keyword("fun")) {
            auto x = p.expect_identifier();
            auto ann = annotation();
            p.expect_symbol("->");
            return mk::lambda(std::move(x), std::move(ann), open());
        }
        if (p.accept_keyword("let")) {
            auto x = p.expect_identifier();
            auto ann = annotation();
            p.expect_symbol("=");
            auto value = open();
            p.expect_keyword("in");
            return mk::app(mk::lambda(std::move(x), std::move(ann), open()), value);
        }
        if (p.accept_keyword("match")) {
            auto scrutinee = open();
            p.expect_keyword("with");
            p.expect_symbol("<");
            std::vector<std::string> binders;
            std::set<std::string> seen;
            do {
                auto x = p.expect_identifier();
                if (!seen.insert(x).second) p.fail("duplicate binder '" + x + "' in tuple pattern");
                binders.push_back(std::move(x));
            } while (p.accept_symbol(","));
            p.expect_symbol(">");
            p.expect_symbol("->");
            return mk::match(scrutinee, std::move(binders), open());
        }
        if (p.accept_keyword("case")) {
            auto scrutinee = open();
            p.expect_keyword("of");
            std::vector<node::CaseBranch> branches;
            do {
                auto ctor = p.expect_identifier();
                auto x = p.expect_identifier();
                p.expect_symbol("->");
                branches.push_back({std::move(ctor), std::move(x), open()});
            } while (p.accept_symbol("|"));
            return mk::case_of(scrutinee, std::move(branches));
        }
        if (p.accept_keyword("fold")) {
            p.expect_symbol("(");
            auto elem = p.expect_identifier();
            p.expect_symbol(",");
            auto acc = p.expect_identifier();
            if (elem == acc) p.fail("fold binders must be distinct");
            p.expect_symbol("->");
            auto step = open();
            p.expect_symbol(")");
            p.expect_keyword("over");
            auto list = open();
            p.expect_keyword("from");
            return mk::fold(std::move(elem), std::move(acc), step, list, open());
        }
        return sum();
    }

    Term sum()
    {
        Term t = prod();
        for (;;) {
            if (p.accept_symbol("+"))
                t = mk::add(t, prod());
            else if (p.accept_symbol("-"))
                t = mk::minus(t, prod());
            else
                return t;
        }
    }

    Term prod()
    {
        Term t = unary();
        while (p.accept_symbol("*")) t = mk::mul(t, unary());
        return t;
    }

    Term unary()
    {
        if (p.accept_symbol("-")) {
            if (p.peek().kind == Token::Kind::number) return mk::lit(-number());
            return mk::mul(mk::lit(-1.0), unary());
        }
        return application();
    }

    bool atom_start() const
    {
        const auto& t = p.peek();
        switch (t.kind) {
        case Token::Kind::identifier:
        case Token::Kind::number:
            return true;
        case Token::Kind::symbol:
            return t.text == "(" || t.text == "<";
        case Token::Kind::keyword:
            return t.text == "nil" || t.text == "cons" || t.text == "inj";
        default:
            return false;
        }
    }

    Term application()
    {
        Term t = atom();
        while (atom_start()) t = mk::app(t, atom());
        return t;
    }

    double number()
    {
        const auto& tok = p.peek();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) p.fail("malformed number '" + tok.text + "'");
        p.advance();
        return v;
    }

    std::vector<Term> comma_list(std::string_view close)
    {
        std::vector<Term> items;
        if (p.accept_symbol(close)) return items;
        do items.push_back(open());
        while (p.accept_symbol(","));
        p.expect_symbol(close);
        return items;
    }

    // `f(a, b)` with f not an op: report that instead of a confusing ',' error.
    bool call_with_commas() const
    {
        if (!(p.peek().kind == Token::Kind::symbol && p.peek().text == "(")) return false;
        int depth = 0;
        for (std::size_t i = 0;; ++i) {
            const auto& t = p.peek(i);
            if (t.kind == Token::Kind::end) return false;
            if (t.kind != Token::Kind::symbol) continue;
            if (t.text == "(" || t.text == "<" || t.text == "[") ++depth;
            else if (t.text == ")" || t.text == ">" || t.text == "]") {
                if (--depth == 0) return false;
            } else if (t.text == "," && depth == 1) {
                return true;
            }
        }
    }

    Term atom()
    {
        const auto& tok = p.peek();
        if (tok.kind == Token::Kind::number) return mk::lit(number());
        if (tok.kind == Token::Kind::identifier) {
            auto name = p.expect_identifier();
            if (is_op(name)) {
                if (p.peek().kind == Token::Kind::symbol && p.peek().text == "(") {
                    p.expect_symbol("(");
                    return mk::op(std::move(name), comma_list(")"));
                }
                return mk::op(std::move(name), {});
            }
            if (call_with_commas()) p.fail("unknown operation '" + name + "'");
            return mk::var(std::move(name));
        }
        if (p.accept_symbol("<")) {
            auto items = comma_list(">");
            if (items.empty()) p.fail("tuples need at least one component");
            return mk::tuple(std::move(items));
        }
        if (p.accept_symbol("(")) {
            Term t = open();
            if (p.accept_symbol(":")) {
                // (nil : list T) ascription; only meaningful on nil.
                auto ty = TypeParser{p}.full();
                if (!t.is<node::Nil>() || !ty.is_list()) p.fail("only nil can be ascribed, with a list type");
                t = mk::nil(ty.element());
            }
            p.expect_symbol(")");
            return t;
        }
        if (p.accept_keyword("nil")) {
            if (p.accept_symbol(":")) {
                auto ty = TypeParser{p}.atom();
                if (!ty.is_list()) p.fail("nil ascription must be a list type");
                return mk::nil(ty.element());
            }
            return mk::nil();
        }
        if (p.accept_keyword("cons")) {
            p.expect_symbol("(");
            auto head = open();
            p.expect_symbol(",");
            auto tail = open();
            p.expect_symbol(")");
            return mk::cons(head, tail);
        }
        if (p.accept_keyword("inj")) {
            auto ty = TypeParser{p}.atom();
            if (!ty.is_variant()) p.fail("inj needs a variant type");
            auto ctor = p.expect_identifier();
            if (!ty.constructor_index(ctor)) p.fail("'" + ctor + "' is not a constructor of " + to_string(ty));
            return mk::inject(ty, std::move(ctor), atom());
        }
        p.fail("expected a term, found " + describe(tok));
    }
};

} // namespace

Term Parser::term()
{
    std::function<bool(std::string_view)> is_op = [this](std::string_view n) { return impl_->is_op(n); };
    return TermParser{*this, is_op}.open();
}

Term parse_term(std::string_view source, const ParseOptions& options)
{
    Parser p(source, options);
    Term t = p.term();
    p.expect_end();
    return t;
}

Type parse_type(std::string_view source)
{
    Parser p(source);
    Type t = p.type();
    p.expect_end();
    return t;
}

} // namespace jetad
