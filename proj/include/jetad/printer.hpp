#pragma once

#include <jetad/term.hpp>
#include <jetad/type.hpp>

#include <string>

namespace jetad {

struct PrintOptions
{
    /// Break `let`/`match`/`case` chains over lines.
    bool multiline = false;
};

/// Renders a term in the surface grammar. parse_term(pretty(t)) is
/// alpha-equivalent to t whenever t uses only surface-legal names; generated
/// names need ParseOptions::allow_reserved (or surface_names first).
std::string pretty(const Term& term, const PrintOptions& options = {});

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

} // namespace jetad
