#include <jetad/oracle/compare.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jetad::oracle {

bool Bound::accepts(double a, double b) const
{
    if (std::isnan(a) || std::isnan(b)) return false;
    return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

JetComparison compare_jets(const JetVector& a, const JetVector& b, const Tolerance& tol)
{
    if (!(a.shape() == b.shape())) throw std::invalid_argument("compare_jets: jets have different shapes");
    JetComparison out;
    for (std::size_t c = 0; c < a.shape().size(); ++c) {
        const auto& alpha = a.shape().coords()[c];
        CoeffReport r{alpha, a[c], b[c], std::abs(a[c] - b[c]), 0.0, false};
        const double scale = std::max(std::abs(a[c]), std::abs(b[c]));
        r.rel_err = scale > 0 ? r.abs_err / scale : 0.0;
        r.pass = tol.for_order(alpha.degree()).accepts(a[c], b[c]);
        out.pass = out.pass && r.pass;
        out.max_rel_err = std::max(out.max_rel_err, r.rel_err);
        out.coeffs.push_back(r);
    }
    return out;
}

nlohmann::json to_json(const JetComparison& cmp)
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : cmp.coeffs)
        coeffs.push_back({{"alpha", c.alpha.digits()},
                          {"a", c.a},
                          {"b", c.b},
                          {"abs_err", c.abs_err},
                          {"rel_err", c.rel_err},
                          {"pass", c.pass}});
    return {{"pass", cmp.pass}, {"max_rel_err", cmp.max_rel_err}, {"coeffs", coeffs}};
}

} // namespace jetad::oracle
