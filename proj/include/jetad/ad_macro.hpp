#pragma once

#include <jetad/jet.hpp>
#include <jetad/term.hpp>
#include <jetad/type.hpp>
#include <jetad/typecheck.hpp>

#include <stdexcept>

namespace jetad {

class Registry;

class MacroError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Which forward Taylor AD to generate: jets of k-dimensional curves up to
/// order R, or the four-slot restricted (2,2) variant that drops the pure
/// second derivatives.
struct MacroConfig
{
    enum class Mode
    {
        full,
        restricted22
    };

    std::size_t k = 1;
    unsigned order = 1;
    Mode mode = Mode::full;
    /// The builtin registry when null.
    const Registry* registry = nullptr;

    static MacroConfig full(std::size_t k, unsigned order, const Registry* registry = nullptr)
    {
        return {k, order, Mode::full, registry};
    }
    static MacroConfig restricted22(const Registry* registry = nullptr) { return {2, 2, Mode::restricted22, registry}; }

    /// Throws MacroError unless k, R >= 1, restricted mode has (k,R) = (2,2),
    /// and the registry's derivative tables reach order R.
    void validate() const;

    const Registry& ops() const;
    JetShape shape() const;
};

/// D[real] = real^N with N the jet size; structural on everything else.
Type d_type(const MacroConfig& cfg, const Type& type);

/// Pointwise d_type, same names and order.
Context d_context(const MacroConfig& cfg, const Context& ctx);

/// The differentiation macro. Homomorphic on every construct except
/// operation calls: D[c] = <c, 0, ..., 0>, and D[op(t1..tn)] binds the jet
/// components of each D[ti] with nested tuple matches and returns the tuple
/// of Faa di Bruno terms built from the registry's partial derivatives.
/// Generated binders use reserved names.
Term d_term(const MacroConfig& cfg, const Term& term);

/// d_term for the restricted (2,2) mode; throws MacroError for other modes.
Term d_term_restricted22(const MacroConfig& cfg, const Term& term);

/// Beta-reduction and reduction of tuple matches on tuple literals, applied
/// until nothing changes. A redex is contracted when the bound value is a
/// variable, literal or tuple of those, or when its binder is used at most
/// once; other bindings are kept.
Term normalize(const Term& term);

} // namespace jetad
