#pragma once

#include <jetad/term.hpp>
#include <jetad/type.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jetad {

class Registry;

/// An ordered typing context with pairwise distinct names.
class Context
{
public:
    Context() = default;
    Context(std::initializer_list<std::pair<std::string, Type>> entries);

    /// Throws std::invalid_argument if `name` is already bound.
    void add(std::string name, Type type);
    const Type* find(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }

    const std::vector<std::pair<std::string, Type>>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<std::pair<std::string, Type>> entries_;
};

class TypeError : public std::runtime_error
{
public:
    enum class Kind
    {
        unbound_variable,
        arity_mismatch,
        type_mismatch,
        non_function_application,
        bad_constructor,
        branch_type_disagreement,
        unknown_operation,
        /// An unannotated lambda or nil whose type is not fixed by context.
        cannot_infer
    };

    TypeError(Kind kind, std::string message, std::vector<std::size_t> path, std::optional<Type> expected = std::nullopt,
              std::optional<Type> actual = std::nullopt);

    Kind kind() const noexcept { return kind_; }
    /// Child indices from the root to the offending subterm.
    const std::vector<std::size_t>& path() const noexcept { return path_; }
    const std::optional<Type>& expected() const noexcept { return expected_; }
    const std::optional<Type>& actual() const noexcept { return actual_; }

private:
    Kind kind_;
    std::vector<std::size_t> path_;
    std::optional<Type> expected_;
    std::optional<Type> actual_;
};

std::string_view to_string(TypeError::Kind kind);

/// The type of `term` under `ctx`. Ops are looked up in `registry` (the
/// builtin one when null). Throws TypeError.
Type infer(const Context& ctx, const Term& term, const Registry* registry = nullptr);

/// Checks `term` against `expected`; expected types flow into unannotated
/// nil, lambda arguments and case branches. Throws TypeError.
void check(const Context& ctx, const Term& term, const Type& expected, const Registry* registry = nullptr);

/// infer() that reports failure as nullopt.
std::optional<Type> try_infer(const Context& ctx, const Term& term, const Registry* registry = nullptr);

/// Subterm at a TypeError path.
Term subterm_at(const Term& term, const std::vector<std::size_t>& path);

} // namespace jetad
