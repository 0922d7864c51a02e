#pragma once

#include <jetad/term.hpp>
#include <jetad/type.hpp>

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetad {

class Registry;

class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct ParseOptions
{
    /// Op names recognised in call syntax; the builtin registry when null.
    const Registry* registry = nullptr;
    /// Accept '%' inside identifiers (generated names).
    bool allow_reserved = false;
};

struct Token
{
    enum class Kind
    {
        identifier,
        number,
        keyword,
        symbol,
        end
    };
    Kind kind = Kind::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Recursive-descent parser over the surface grammar. Exposed so that other
/// file formats (op files) can embed terms and types.
///
///   type ::= "real" | "list" type | "(" type ("*" type)+ ")" | "(" type "*" ")"
///          | "(" type ")" | "[" ctor ":" type ("|" ctor ":" type)* "]" | type "->" type
///   term ::= "fun" x [":" type] "->" term | "let" x [":" type] "=" term "in" term
///          | "match" term "with" "<" x ("," x)* ">" "->" term
///          | "case" term "of" C x "->" term ("|" C x "->" term)*
///          | "fold" "(" x "," x "->" term ")" "over" term "from" term
///          | sum
///   sum  ::= prod (("+" | "-") prod)*        prod ::= unary ("*" unary)*
///   unary ::= "-" unary | app                app ::= atom atom*
///   atom ::= x | number | op "(" term ("," term)* ")" | "<" term ("," term)* ">"
///          | "(" term ")" | "nil" [":" type] | "cons" "(" term "," term ")"
///          | "inj" variant-type C atom
class Parser
{
public:
    explicit Parser(std::string_view source, ParseOptions options = {});

    Term term();
    Type type();

    bool at_end() const;
    const Token& peek(std::size_t ahead = 0) const;
    Token advance();
    bool accept_keyword(std::string_view keyword);
    bool accept_symbol(std::string_view symbol);
    void expect_symbol(std::string_view symbol);
    void expect_keyword(std::string_view keyword);
    std::string expect_identifier();
    /// The raw text of a number token made only of digits.
    std::string expect_digits();
    void expect_end();
    [[noreturn]] void fail(const std::string& message) const;

    /// Makes subsequently parsed call syntax accept `name` as an op.
    void declare_op(std::string name);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Parses a whole source text as one term.
Term parse_term(std::string_view source, const ParseOptions& options = {});

/// Parses a whole source text as one type.
Type parse_type(std::string_view source);

} // namespace jetad
