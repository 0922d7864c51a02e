#include <jetad/detail/overloaded.hpp>
#include <jetad/printer.hpp>

#include <array>
#include <charconv>
#include <cmath>

namespace jetad {

// ---------------------------------------------------------------------------
// types
// ---------------------------------------------------------------------------

namespace {

std::string type_text(const Type& t, bool atomic)
{
    switch (t.kind()) {
    case Type::Kind::real:
        return "real";
    case Type::Kind::list:
        return "list " + type_text(t.element(), true);
    case Type::Kind::product: {
        const auto& cs = t.components();
        if (cs.size() == 1) return "(" + type_text(cs[0], false) + " *)";
        std::string out = "(";
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (i) out += " * ";
            out += type_text(cs[i], false);
        }
        return out + ")";
    }
    case Type::Kind::variant: {
        std::string out = "[";
        for (std::size_t i = 0; i < t.components().size(); ++i) {
            if (i) out += " | ";
            out += t.constructor_names()[i] + ": " + type_text(t.components()[i], false);
        }
        return out + "]";
    }
    case Type::Kind::function: {
        std::string out = type_text(t.domain(), true) + " -> " + type_text(t.codomain(), false);
        return atomic ? "(" + out + ")" : out;
    }
    }
    return "?";
}

} // namespace

std::string to_string(const Type& type) { return type_text(type, false); }

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

// ---------------------------------------------------------------------------
// terms
// ---------------------------------------------------------------------------

namespace {

// Precedence levels: open forms extend as far right as possible.
enum Level
{
    open_level = 0,
    sum_level = 1,
    prod_level = 2,
    app_level = 3,
    atom_level = 4
};

class Printer
{
public:
    explicit Printer(const PrintOptions& opts) : opts_(opts) {}

    std::string print(const Term& t, int ctx, int indent)
    {
        int lvl = level(t);
        std::string body = render(t, lvl, indent);
        return lvl < ctx ? "(" + body + ")" : body;
    }

private:
    const PrintOptions& opts_;

    static bool is_binary(const node::OpApp& o, const char* name) { return o.op == name && o.args.size() == 2; }

    static int level(const Term& t)
    {
        return t.visit(detail::overloaded{
            [](const node::Var&) -> int { return atom_level; },
            [](const node::Const&) -> int { return atom_level; },
            [](const node::OpApp& o) -> int {
                if (is_binary(o, "+")) return sum_level;
                if (is_binary(o, "*")) return prod_level;
                return atom_level;
            },
            [](const node::Tuple&) -> int { return atom_level; },
            [](const node::TupleMatch&) -> int { return open_level; },
            [](const node::Lambda&) -> int { return open_level; },
            [](const node::App& a) -> int { return a.fn.is<node::Lambda>() ? open_level : app_level; },
            [](const node::Inject&) -> int { return app_level; },
            [](const node::Case&) -> int { return open_level; },
            [](const node::Nil&) -> int { return atom_level; },
            [](const node::Cons&) -> int { return atom_level; },
            [](const node::Fold&) -> int { return open_level; },
        });
    }

    std::string brk(int indent) const
    {
        return opts_.multiline ? "\n" + std::string(static_cast<std::size_t>(indent), ' ') : " ";
    }

    static std::string annotation(const std::optional<Type>& ann)
    {
        return ann ? " : " + type_text(*ann, true) : std::string();
    }

    std::string render(const Term& t, int lvl, int indent)
    {
        // Inside parentheses the continuation lines of a nested chain are
        // indented one step further.
        const int inner = lvl == open_level ? indent : indent + 2;
        return t.visit(detail::overloaded{
            [&](const node::Var& v) { return v.name; },
            [&](const node::Const& c) {
                auto s = format_number(c.value);
                return std::signbit(c.value) ? "(" + s + ")" : s;
            },
            [&](const node::OpApp& o) {
                if (is_binary(o, "+")) {
                    // a + (-1) * b is how `a - b` parses.
                    if (const auto* m = o.args[1].as<node::OpApp>(); m && is_binary(*m, "*")) {
                        const auto* c = m->args[0].as<node::Const>();
                        if (c && c->value == -1.0)
                            return print(o.args[0], sum_level, inner) + " - " + print(m->args[1], prod_level, inner);
                    }
                    return print(o.args[0], sum_level, inner) + " + " + print(o.args[1], prod_level, inner);
                }
                if (is_binary(o, "*"))
                    return print(o.args[0], prod_level, inner) + " * " + print(o.args[1], app_level, inner);
                if (o.args.empty()) return o.op + "()";
                std::string out = o.op + "(";
                for (std::size_t i = 0; i < o.args.size(); ++i) {
                    if (i) out += ", ";
                    out += print(o.args[i], open_level, inner + 2);
                }
                return out + ")";
            },
            [&](const node::Tuple& tu) {
                std::string out = "<";
                for (std::size_t i = 0; i < tu.items.size(); ++i) {
                    if (i) out += ", ";
                    out += print(tu.items[i], open_level, inner + 2);
                }
                return out + ">";
            },
            [&](const node::TupleMatch& m) {
                std::string out = "match " + print(m.scrutinee, open_level, inner + 2) + " with <";
                for (std::size_t i = 0; i < m.binders.size(); ++i) {
                    if (i) out += ", ";
                    out += m.binders[i];
                }
                return out + "> ->" + brk(inner) + print(m.body, open_level, inner);
            },
            [&](const node::Lambda& l) {
                return "fun " + l.binder + annotation(l.annotation) + " -> " + print(l.body, open_level, inner);
            },
            [&](const node::App& a) {
                if (const auto* l = a.fn.as<node::Lambda>()) {
                    return "let " + l->binder + annotation(l->annotation) + " = " +
                           print(a.arg, open_level, inner + 2) + " in" + brk(inner) + print(l->body, open_level, inner);
                }
                return print(a.fn, app_level, inner) + " " + print(a.arg, atom_level, inner);
            },
            [&](const node::Inject& i) {
                return "inj " + type_text(i.variant, true) + " " + i.ctor + " " + print(i.payload, atom_level, inner);
            },
            [&](const node::Case& c) {
                std::string out = "case " + print(c.scrutinee, open_level, inner + 2) + " of";
                for (std::size_t i = 0; i < c.branches.size(); ++i) {
                    const auto& b = c.branches[i];
                    const bool last = i + 1 == c.branches.size();
                    out += (i ? brk(inner) + "| " : brk(inner + 2)) + b.ctor + " " + b.binder + " -> " +
                           print(b.body, last ? open_level : sum_level, inner + 4);
                }
                return out;
            },
            [&](const node::Nil& n) {
                if (n.element) return "(nil : " + type_text(Type::list(*n.element), false) + ")";
                return std::string("nil");
            },
            [&](const node::Cons& c) {
                return "cons(" + print(c.head, open_level, inner + 2) + ", " + print(c.tail, open_level, inner + 2) +
                       ")";
            },
            [&](const node::Fold& f) {
                return "fold (" + f.elem + ", " + f.acc + " -> " + print(f.step, open_level, inner + 2) + ") over " +
                       print(f.list, open_level, inner + 2) + " from " + print(f.init, open_level, inner);
            },
        });
    }
};

} // namespace

std::string pretty(const Term& term, const PrintOptions& options)
{
    return Printer(options).print(term, open_level, 0);
}

} // namespace jetad
