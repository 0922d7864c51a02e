#pragma once

#include <jetad/multi_index.hpp>

#include <boost/rational.hpp>
#include <json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace jetad {

using Rational = boost::rational<long long>;

/// The coordinate system of a jet: which partial derivatives of an R^k -> R
/// map are stored, and in which order.
///
/// A full (k, R) shape holds every multi-index of degree <= R in lexicographic
/// order, C(R+k, k) of them. The restricted (2,2) shape drops the two pure
/// second derivatives and keeps (00, 01, 10, 11).
class JetShape
{
public:
    static JetShape full(std::size_t k, unsigned order);
    static JetShape restricted22();

    std::size_t k() const noexcept { return k_; }
    unsigned order() const noexcept { return order_; }
    bool restricted() const noexcept { return restricted_; }
    std::size_t size() const noexcept { return coords_.size(); }
    const std::vector<MultiIndex>& coords() const noexcept { return coords_; }
    std::optional<std::size_t> index_of(const MultiIndex& alpha) const;

    friend bool operator==(const JetShape& a, const JetShape& b)
    {
        return a.k_ == b.k_ && a.order_ == b.order_ && a.restricted_ == b.restricted_;
    }

private:
    JetShape(std::size_t k, unsigned order, bool restricted, std::vector<MultiIndex> coords)
        : k_(k), order_(order), restricted_(restricted), coords_(std::move(coords))
    {}

    std::size_t k_;
    unsigned order_;
    bool restricted_;
    std::vector<MultiIndex> coords_;
};

/// Lexicographic coordinates of the full (k, R) jet; k >= 1.
JetShape enumerate_coords(std::size_t k, unsigned order);

/// Partial derivatives of some map R^k -> R at a point, one per shape
/// coordinate. Coefficients are raw derivatives, not divided by alpha!.
class JetVector
{
public:
    explicit JetVector(JetShape shape);
    JetVector(JetShape shape, std::vector<double> coeffs);

    const JetShape& shape() const noexcept { return shape_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<double> coeffs() noexcept { return coeffs_; }

    double operator[](std::size_t i) const { return coeffs_[i]; }
    double& operator[](std::size_t i) { return coeffs_[i]; }
    double at(const MultiIndex& alpha) const;
    double& at(const MultiIndex& alpha);
    double value() const { return coeffs_.front(); }

private:
    JetShape shape_;
    std::vector<double> coeffs_;
};

/// One summand of the multivariate Faa di Bruno formula for d^alpha (f;g),
/// where f : R^k -> R^l and g : R^l -> R:
///
///   coefficient * (d^beta g)(f(a)) * prod_r prod_j (d^{alpha_r} f_j (a))^{e_r[j]}
///
/// `factors` lists only the alpha_r with a nonzero exponent vector.
struct FdBTerm
{
    struct Factor
    {
        MultiIndex part;
        std::vector<unsigned> exponents;

        friend bool operator==(const Factor&, const Factor&) = default;
    };

    MultiIndex beta;
    std::vector<Factor> factors;
    Rational coefficient;

    long long integer_coefficient() const;
};

/// Every Faa di Bruno term for d^alpha with an l-dimensional intermediate
/// space. |alpha| >= 1 and l >= 0. Results are memoised; the reference stays
/// valid for the life of the process.
///
/// Terms are ordered by |beta| ascending, then by beta descending
/// lexicographically (so slot 1 comes first), then by enumeration order.
const std::vector<FdBTerm>& enumerate_fdb(const MultiIndex& alpha, std::size_t l);

/// The (k,R) Taylor representation of g applied to jets.
///
/// `g_derivs` must hold d^beta g at the value parts of `args` for every beta
/// over args.size() slots with |beta| <= shape.order(); the zero multi-index
/// supplies g's value.
JetVector compose_jets(const std::map<MultiIndex, double>& g_derivs, std::span<const JetVector> args,
                       const JetShape& shape);

/// Jets of the affine maps u |-> point[i] + sum_c directions[c][i] * u_c.
/// `directions` has shape.k() rows of point.size() entries.
std::vector<JetVector> seed_affine(std::span<const double> point, const std::vector<std::vector<double>>& directions,
                                   const JetShape& shape);

/// {"k":2,"r":2,"coeffs":{"00":...,...}}; restricted shapes add
/// "mode":"restricted22".
nlohmann::json to_json(const JetVector& jet);
JetVector jet_from_json(const nlohmann::json& j);

} // namespace jetad
