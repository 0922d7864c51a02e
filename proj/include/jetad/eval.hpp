#pragma once

#include <jetad/ad_macro.hpp>
#include <jetad/jet.hpp>
#include <jetad/term.hpp>
#include <jetad/type.hpp>
#include <jetad/typecheck.hpp>

#include <json.hpp>

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetad {

class Registry;
class Env;
struct ValueNode;

class EvalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Runtime value: real, tuple, closure, variant or list. Immutable.
class Value
{
public:
    enum class Kind
    {
        real,
        tuple,
        closure,
        variant,
        list
    };

    static Value real(double v);
    static Value tuple(std::vector<Value> items);
    static Value closure(std::string binder, Term body, Env env);
    static Value variant(std::string ctor, Value payload);
    static Value list(std::vector<Value> items);

    Kind kind() const noexcept;
    double as_real() const;
    /// Tuple components or list elements.
    const std::vector<Value>& items() const;
    const std::string& ctor() const;
    const Value& payload() const;
    const std::string& binder() const;
    const Term& body() const;
    const Env& env() const;

private:
    explicit Value(std::shared_ptr<const ValueNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ValueNode> node_;
};

/// Persistent environment: extension shares the parent.
class Env
{
public:
    Env() = default;

    Env bind(std::string name, Value value) const;
    const Value* find(std::string_view name) const;

private:
    struct Node;
    explicit Env(std::shared_ptr<const Node> head) : head_(std::move(head)) {}
    std::shared_ptr<const Node> head_;
};

struct ValueNode
{
    Value::Kind kind = Value::Kind::real;
    double real = 0.0;
    std::vector<Value> items;
    std::string name; // binder or constructor
    std::optional<Term> body;
    Env env;
};

/// Call-by-value evaluation. Ops use the registry's numeric functions (the
/// builtin registry when null). Throws EvalError on unbound variables or
/// shape errors, which cannot happen for well-typed terms.
Value eval(const Env& env, const Term& term, const Registry* registry = nullptr);

/// Applies a closure value to an argument.
Value apply(const Value& fn, const Value& arg, const Registry* registry = nullptr);

/// Same shape and bitwise-equal reals. Closures never compare equal.
bool bit_identical(const Value& a, const Value& b);

/// Numbers, arrays for tuples, {"list": [...]}, {"ctor": C, "value": v},
/// {"closure": "<source>"}.
nlohmann::json to_json(const Value& value);

/// Reads a value of `type`. Tuples and lists are JSON arrays (lists may
/// also be {"list": [...]}); variants are {"ctor": C, "value": v}.
Value value_from_json(const nlohmann::json& j, const Type& type);

/// Builds an Env for `ctx` from a JSON object with one entry per variable.
Env env_from_json(const nlohmann::json& j, const Context& ctx);

/// A real-valued program over real variables x1..xn.
struct FirstOrderProgram
{
    Context ctx;
    Term body;
};

/// Flattens a program into a FirstOrderProgram. Context variables and
/// function arguments whose types are built from real and products are
/// replaced by one real variable per leaf; curried arguments are applied in
/// order. The result type must be real.
FirstOrderProgram first_order_view(const Term& program, const Context& ctx, const Registry* registry = nullptr);

/// Evaluates `program` (type real under `ctx`, all variables real) at a
/// point.
double eval_at(const FirstOrderProgram& program, std::span<const double> point, const Registry* registry = nullptr);

/// Runs d_term(cfg, program) with each variable bound to the tuple
/// encoding of its seed jet and decodes the resulting jet. Seeds must have
/// cfg's shape.
JetVector eval_jet_program(const MacroConfig& cfg, const Term& program, const Context& ctx,
                           std::span<const JetVector> seeds);

/// Same, reusing an already transformed program.
JetVector eval_transformed(const MacroConfig& cfg, const Term& transformed, const Context& ctx,
                           std::span<const JetVector> seeds);

/// Tuple encoding of a jet as a value of type D[real].
Value jet_value(const JetVector& jet);
JetVector jet_from_value(const Value& value, const JetShape& shape);

} // namespace jetad
