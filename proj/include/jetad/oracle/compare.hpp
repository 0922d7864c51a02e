#pragma once

#include <jetad/jet.hpp>

#include <json.hpp>

#include <vector>

namespace jetad::oracle {

/// Mixed absolute/relative bound: |a - b| <= abs + rel * max(|a|, |b|).
struct Bound
{
    double rel = 0.0;
    double abs = 0.0;

    bool accepts(double a, double b) const;
};

/// Per-order bounds; orders above 2 use the order-2 bound.
struct Tolerance
{
    Bound low{1e-6, 1e-9}; // orders 0 and 1
    Bound second{1e-3, 1e-6};

    static Tolerance uniform(double rel, double abs = 0.0) { return {{rel, abs}, {rel, abs}}; }
    const Bound& for_order(unsigned order) const { return order <= 1 ? low : second; }
};

struct CoeffReport
{
    MultiIndex alpha;
    double a = 0.0;
    double b = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    bool pass = false;
};

struct JetComparison
{
    bool pass = true;
    double max_rel_err = 0.0;
    std::vector<CoeffReport> coeffs;
};

/// Coefficientwise comparison; throws std::invalid_argument on shape
/// mismatch.
JetComparison compare_jets(const JetVector& a, const JetVector& b, const Tolerance& tol = {});

nlohmann::json to_json(const JetComparison& cmp);

} // namespace jetad::oracle
