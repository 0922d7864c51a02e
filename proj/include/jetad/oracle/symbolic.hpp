#pragma once

#include <jetad/jet.hpp>
#include <jetad/multi_index.hpp>

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace jetad::oracle {

struct SymAtom;

/// Exact symbolic expression in polynomial normal form: a finite sum of
/// rational multiples of monomials over atoms. Atoms are variables x_i,
/// sigmoid(e), exp(e), and abstract functions name^beta(e_1, ..., e_n)
/// standing for the beta-th partial derivative of an unknown smooth map.
/// Two expressions compare equal iff their normal forms coincide.
class Sym
{
public:
    Sym() = default;

    static Sym constant(Rational c);
    static Sym var(std::size_t i);
    static Sym sigmoid(const Sym& arg);
    static Sym exp(const Sym& arg);
    /// The partial derivative `derivative` of an unknown function `name`
    /// applied to `args`; derivative.dims() == args.size().
    static Sym function(const std::string& name, const MultiIndex& derivative, std::vector<Sym> args);

    friend Sym operator+(const Sym& a, const Sym& b);
    friend Sym operator-(const Sym& a, const Sym& b);
    friend Sym operator*(const Sym& a, const Sym& b);
    friend bool operator==(const Sym& a, const Sym& b);

    /// d/dx_i.
    Sym derivative(std::size_t i) const;

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    std::string to_string() const;

    using FunctionTable =
        std::map<std::string, std::function<double(const MultiIndex&, std::span<const double>)>, std::less<>>;
    double eval(std::span<const double> x, const FunctionTable& functions = {}) const;

private:
    using Monomial = std::map<std::string, unsigned>; // atom key -> exponent
    std::map<Monomial, Rational> terms_;
    std::map<std::string, std::shared_ptr<const SymAtom>> atoms_;

    static Sym atom(std::shared_ptr<const SymAtom> a);
    void merge_atoms(const Sym& other);
    void add_term(const Monomial& m, Rational c);
};

/// e, de/dx_0, ..., d^order e / dx_0^order.
std::vector<Sym> sym_derivs(const Sym& e, unsigned order);

/// d^alpha of g(f_1(x), ..., f_l(x)) with x in R^k, g and f_j abstract,
/// computed by repeated symbolic differentiation.
Sym chain_rule_by_differentiation(const MultiIndex& alpha, std::size_t l);

/// The same derivative assembled from enumerate_fdb(alpha, l).
Sym chain_rule_from_fdb(const MultiIndex& alpha, std::size_t l);

} // namespace jetad::oracle
