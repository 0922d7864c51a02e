#pragma once

#include <jetad/multi_index.hpp>
#include <jetad/term.hpp>

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetad {

class RegistryError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A primitive operation R^n -> R together with syntactic terms for its
/// partial derivatives. Derivative terms have free variables among
/// x1, ..., xn (see argument_name) and are spliced by the macro.
struct OpSpec
{
    std::string name;
    std::size_t arity = 0;
    std::function<double(std::span<const double>)> numeric;
    /// beta over `arity` slots, 1 <= |beta| <= max order of the registry.
    std::map<MultiIndex, Term> derivatives;
};

/// Name of the i-th (0-based) argument variable inside derivative terms.
std::string argument_name(std::size_t i);

/// Operation table shared by the parser, typechecker, macro and evaluator.
/// Built once, then read-only.
class Registry
{
public:
    explicit Registry(unsigned max_order) : max_order_(max_order) {}

    unsigned max_order() const noexcept { return max_order_; }

    /// Validates closure of the derivative table under max_order(), that each
    /// derivative term has type real under x1..xn : real, and that it only
    /// uses registered operations. The op itself is visible to its own
    /// derivative terms.
    void register_op(OpSpec spec);

    const OpSpec* find(std::string_view name) const;
    const OpSpec& at(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }

    /// d^beta op as a term over x1..xn.
    const Term& derivative(std::string_view name, const MultiIndex& beta) const;

    /// Same entry addressed by the (unordered) list of argument slots to
    /// differentiate by, e.g. {1, 0} and {0, 1} both mean beta = (1,1).
    const Term& derivative_by_slots(std::string_view name, std::vector<std::size_t> slots) const;

    std::vector<std::string> names() const;

private:
    unsigned max_order_;
    std::map<std::string, OpSpec, std::less<>> ops_;
};

/// +, * and sigmoid with their derivative tables of order <= max_order.
/// Throws RegistryError for max_order > 2.
Registry builtin_registry(unsigned max_order = 2);

/// Process-wide builtin registry with max order 2.
const Registry& default_registry();

/// Parses `op name/arity [= term] (deriv digits = term)+` blocks and
/// registers each op. Without `= term` the numeric function must be one of
/// the known library functions (exp, log, sin, cos, tanh, sqrt, pi).
void load_op_file(std::string_view source, Registry& registry);

} // namespace jetad
