#include <jetad/jet.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace jetad {

// ---------------------------------------------------------------------------
// shapes and vectors
// ---------------------------------------------------------------------------

JetShape JetShape::full(std::size_t k, unsigned order)
{
    if (k == 0) throw std::invalid_argument("jet dimension k must be at least 1");
    return JetShape(k, order, false, multi_indices_up_to(k, order));
}

JetShape JetShape::restricted22()
{
    return JetShape(2, 2, true, {MultiIndex{0, 0}, MultiIndex{0, 1}, MultiIndex{1, 0}, MultiIndex{1, 1}});
}

std::optional<std::size_t> JetShape::index_of(const MultiIndex& alpha) const
{
    auto it = std::lower_bound(coords_.begin(), coords_.end(), alpha);
    if (it == coords_.end() || *it != alpha) return std::nullopt;
    return static_cast<std::size_t>(it - coords_.begin());
}

JetShape enumerate_coords(std::size_t k, unsigned order) { return JetShape::full(k, order); }

JetVector::JetVector(JetShape shape) : shape_(std::move(shape)), coeffs_(shape_.size(), 0.0) {}

JetVector::JetVector(JetShape shape, std::vector<double> coeffs) : shape_(std::move(shape)), coeffs_(std::move(coeffs))
{
    if (coeffs_.size() != shape_.size())
        throw std::invalid_argument("jet has " + std::to_string(coeffs_.size()) + " coefficients, shape needs " +
                                    std::to_string(shape_.size()));
}

double JetVector::at(const MultiIndex& alpha) const
{
    auto i = shape_.index_of(alpha);
    if (!i) throw std::out_of_range("multi-index " + alpha.digits() + " is not a coordinate of this jet");
    return coeffs_[*i];
}

double& JetVector::at(const MultiIndex& alpha)
{
    auto i = shape_.index_of(alpha);
    if (!i) throw std::out_of_range("multi-index " + alpha.digits() + " is not a coordinate of this jet");
    return coeffs_[*i];
}

// ---------------------------------------------------------------------------
// Faa di Bruno enumeration
// ---------------------------------------------------------------------------

long long FdBTerm::integer_coefficient() const
{
    if (coefficient.denominator() != 1)
        throw std::logic_error("Faa di Bruno coefficient is not integral: " + std::to_string(coefficient.numerator()) +
                               "/" + std::to_string(coefficient.denominator()));
    return coefficient.numerator();
}

namespace {

long long factorial(unsigned n)
{
    long long f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

class FdBEnumerator
{
public:
    FdBEnumerator(const MultiIndex& alpha, std::size_t l) : alpha_(alpha), l_(l)
    {
        for (const auto& p : multi_indices_up_to(alpha.dims(), alpha.degree()))
            if (!p.is_zero() && p.bounded_by(alpha)) parts_.push_back(p);
    }

    std::vector<FdBTerm> run()
    {
        std::vector<unsigned> multiplicity(parts_.size(), 0U);
        partition(0, alpha_, multiplicity);
        std::stable_sort(out_.begin(), out_.end(), [](const FdBTerm& a, const FdBTerm& b) {
            if (a.beta.degree() != b.beta.degree()) return a.beta.degree() < b.beta.degree();
            return b.beta < a.beta;
        });
        return std::move(out_);
    }

private:
    MultiIndex alpha_;
    std::size_t l_;
    std::vector<MultiIndex> parts_;
    std::vector<FdBTerm> out_;

    // Chooses how many times each part occurs so that the parts sum to alpha.
    void partition(std::size_t r, MultiIndex remaining, std::vector<unsigned>& multiplicity)
    {
        if (r == parts_.size()) {
            if (remaining.is_zero()) distribute(multiplicity);
            return;
        }
        const auto& part = parts_[r];
        for (unsigned m = 0;; ++m) {
            multiplicity[r] = m;
            partition(r + 1, remaining, multiplicity);
            bool fits = true;
            for (std::size_t i = 0; i < part.dims(); ++i) {
                if (remaining[i] < part[i]) {
                    fits = false;
                    break;
                }
            }
            if (!fits) break;
            for (std::size_t i = 0; i < part.dims(); ++i) remaining[i] -= part[i];
        }
        multiplicity[r] = 0;
    }

    // Splits each multiplicity over the l intermediate slots.
    void distribute(const std::vector<unsigned>& multiplicity)
    {
        std::vector<std::size_t> used;
        for (std::size_t r = 0; r < parts_.size(); ++r)
            if (multiplicity[r] > 0) used.push_back(r);
        if (l_ == 0) return;
        std::vector<FdBTerm::Factor> factors;
        assign(used, 0, multiplicity, factors);
    }

    void assign(const std::vector<std::size_t>& used, std::size_t u, const std::vector<unsigned>& multiplicity,
                std::vector<FdBTerm::Factor>& factors)
    {
        if (u == used.size()) {
            emit(factors);
            return;
        }
        std::vector<unsigned> exponents(l_, 0U);
        compositions(multiplicity[used[u]], 0, exponents, [&](const std::vector<unsigned>& e) {
            factors.push_back({parts_[used[u]], e});
            assign(used, u + 1, multiplicity, factors);
            factors.pop_back();
        });
    }

    template <typename F>
    void compositions(unsigned total, std::size_t slot, std::vector<unsigned>& e, F&& f)
    {
        if (slot + 1 == e.size()) {
            e[slot] = total;
            f(e);
            e[slot] = 0;
            return;
        }
        for (unsigned v = 0; v <= total; ++v) {
            e[slot] = v;
            compositions(total - v, slot + 1, e, f);
        }
        e[slot] = 0;
    }

    void emit(const std::vector<FdBTerm::Factor>& factors)
    {
        FdBTerm term;
        term.beta = MultiIndex::zero(l_);
        Rational coeff{static_cast<long long>(alpha_.factorial())};
        for (const auto& f : factors) {
            const auto part_factorial = static_cast<long long>(f.part.factorial());
            for (std::size_t j = 0; j < l_; ++j) {
                term.beta[j] += f.exponents[j];
                long long denom = factorial(f.exponents[j]);
                for (unsigned p = 0; p < f.exponents[j]; ++p) denom *= part_factorial;
                coeff /= denom;
            }
        }
        term.factors = factors;
        term.coefficient = coeff;
        out_.push_back(std::move(term));
    }
};

struct FdBCache
{
    std::shared_mutex mutex;
    std::map<std::pair<MultiIndex, std::size_t>, std::vector<FdBTerm>> entries;
};

FdBCache& fdb_cache()
{
    static FdBCache cache;
    return cache;
}

} // namespace

const std::vector<FdBTerm>& enumerate_fdb(const MultiIndex& alpha, std::size_t l)
{
    if (alpha.is_zero()) throw std::invalid_argument("enumerate_fdb needs |alpha| >= 1");
    auto& cache = fdb_cache();
    auto key = std::make_pair(alpha, l);
    {
        std::shared_lock lock(cache.mutex);
        if (auto it = cache.entries.find(key); it != cache.entries.end()) return it->second;
    }
    auto terms = FdBEnumerator(alpha, l).run();
    std::unique_lock lock(cache.mutex);
    auto [it, inserted] = cache.entries.try_emplace(key, std::move(terms));
    return it->second;
}

// ---------------------------------------------------------------------------
// composition and seeding
// ---------------------------------------------------------------------------

JetVector compose_jets(const std::map<MultiIndex, double>& g_derivs, std::span<const JetVector> args,
                       const JetShape& shape)
{
    for (const auto& a : args)
        if (!(a.shape() == shape)) throw std::invalid_argument("compose_jets: argument jet shape mismatch");
    const std::size_t l = args.size();
    auto g_at = [&](const MultiIndex& beta) {
        auto it = g_derivs.find(beta);
        if (it == g_derivs.end()) throw std::invalid_argument("compose_jets: missing derivative of g for beta=" + beta.digits());
        return it->second;
    };

    JetVector out(shape);
    for (std::size_t c = 0; c < shape.size(); ++c) {
        const auto& alpha = shape.coords()[c];
        if (alpha.is_zero()) {
            out[c] = g_at(MultiIndex::zero(l));
            continue;
        }
        double total = 0.0;
        for (const auto& term : enumerate_fdb(alpha, l)) {
            double t = static_cast<double>(term.integer_coefficient()) * g_at(term.beta);
            for (const auto& f : term.factors)
                for (std::size_t j = 0; j < l; ++j)
                    for (unsigned e = 0; e < f.exponents[j]; ++e) t *= args[j].at(f.part);
            total += t;
        }
        out[c] = total;
    }
    return out;
}

std::vector<JetVector> seed_affine(std::span<const double> point, const std::vector<std::vector<double>>& directions,
                                   const JetShape& shape)
{
    if (directions.size() != shape.k())
        throw std::invalid_argument("seed_affine: need " + std::to_string(shape.k()) + " direction rows, got " +
                                    std::to_string(directions.size()));
    for (const auto& row : directions)
        if (row.size() != point.size()) throw std::invalid_argument("seed_affine: direction row length != point length");

    std::vector<JetVector> out;
    out.reserve(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
        JetVector jet(shape);
        for (std::size_t c = 0; c < shape.size(); ++c) {
            const auto& alpha = shape.coords()[c];
            if (alpha.is_zero()) {
                jet[c] = point[i];
            } else if (alpha.degree() == 1) {
                auto axis = static_cast<std::size_t>(std::find(alpha.entries().begin(), alpha.entries().end(), 1U) -
                                                     alpha.entries().begin());
                jet[c] = directions[axis][i];
            }
        }
        out.push_back(std::move(jet));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::json to_json(const JetVector& jet)
{
    nlohmann::json j;
    j["k"] = jet.shape().k();
    j["r"] = jet.shape().order();
    if (jet.shape().restricted()) j["mode"] = "restricted22";
    nlohmann::json coeffs = nlohmann::json::object();
    for (std::size_t c = 0; c < jet.shape().size(); ++c) coeffs[jet.shape().coords()[c].digits()] = jet[c];
    j["coeffs"] = std::move(coeffs);
    return j;
}

JetVector jet_from_json(const nlohmann::json& j)
{
    const auto k = j.at("k").get<std::size_t>();
    const auto r = j.at("r").get<unsigned>();
    if (k > 9) throw std::invalid_argument("jet JSON supports k <= 9");
    const bool restricted = j.contains("mode") && j.at("mode").get<std::string>() == "restricted22";
    if (restricted && (k != 2 || r != 2)) throw std::invalid_argument("restricted22 jets must have k=2, r=2");
    JetShape shape = restricted ? JetShape::restricted22() : JetShape::full(k, r);
    const auto& coeffs = j.at("coeffs");
    JetVector jet(shape);
    for (std::size_t c = 0; c < shape.size(); ++c) {
        auto key = shape.coords()[c].digits();
        if (!coeffs.contains(key)) throw std::invalid_argument("jet JSON missing coefficient '" + key + "'");
        jet[c] = coeffs.at(key).get<double>();
    }
    return jet;
}

} // namespace jetad
