#pragma once

#include <jetad/term.hpp>

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace jetad {

/// Free variables of a term.
std::set<std::string> free_vars(const Term& term);

/// Free variables in order of first (left-to-right) occurrence.
std::vector<std::string> free_vars_ordered(const Term& term);

/// Number of free occurrences of `name`.
std::size_t count_free(const Term& term, std::string_view name);

/// Names containing '%' are reserved for generated binders; the surface
/// grammar rejects them.
bool is_reserved(std::string_view name) noexcept;

/// A fresh reserved name `base%N` with N drawn from a process-wide monotone
/// counter. Any existing `%N` suffix on `base` is dropped first.
std::string fresh_name(std::string_view base);

/// Capture-avoiding substitution body[replacement/var].
Term substitute(const Term& body, const std::string& var, const Term& replacement);

/// Simultaneous capture-avoiding substitution.
Term substitute_many(const Term& body, const std::map<std::string, Term>& replacements);

/// Equality up to consistent renaming of bound variables. Literals compare
/// bitwise; type annotations compare structurally.
bool alpha_eq(const Term& a, const Term& b);

/// Renames every reserved name to a surface-legal identifier that occurs
/// nowhere else in the term. The result is alpha-equivalent to the input when
/// all reserved names are bound.
Term surface_names(const Term& term);

/// Number of nodes; used for size budgets in tests and diagnostics.
std::size_t term_size(const Term& term);

} // namespace jetad
