#include <jetad/oracle/numeric.hpp>

#include <jetad/ad_macro.hpp>

#include <stdexcept>

namespace jetad::oracle {

namespace {

class Line
{
public:
    Line(const FirstOrderProgram& p, std::span<const double> point, const Registry* reg)
        : p_(p), point_(point.begin(), point.end()), reg_(reg)
    {}

    // program(point + t * dir)
    double operator()(const std::vector<double>& dir, double t) const
    {
        std::vector<double> x = point_;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * dir[i];
        return eval_at(p_, x, reg_);
    }

    double first(const std::vector<double>& d, double h) const
    {
        return (-(*this)(d, 2 * h) + 8 * (*this)(d, h) - 8 * (*this)(d, -h) + (*this)(d, -2 * h)) / (12 * h);
    }

    double second(const std::vector<double>& d, double h) const
    {
        return (-(*this)(d, 2 * h) + 16 * (*this)(d, h) - 30 * (*this)(d, 0) + 16 * (*this)(d, -h) -
                (*this)(d, -2 * h)) /
               (12 * h * h);
    }

private:
    const FirstOrderProgram& p_;
    std::vector<double> point_;
    const Registry* reg_;
};

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

} // namespace

JetVector fd_jet(const FirstOrderProgram& program, std::span<const double> point,
                 const std::vector<std::vector<double>>& directions, const JetShape& shape, FdSteps steps,
                 const Registry* registry)
{
    if (shape.order() > 2) throw std::invalid_argument("fd_jet supports orders up to 2");
    if (directions.size() != shape.k()) throw std::invalid_argument("fd_jet: need one direction per jet axis");
    for (const auto& d : directions)
        if (d.size() != point.size()) throw std::invalid_argument("fd_jet: direction length != point length");

    Line f(program, point, registry);
    std::vector<double> pure(shape.k(), 0.0);
    for (std::size_t c = 0; c < shape.k(); ++c) pure[c] = f.second(directions[c], steps.second);

    JetVector out(shape);
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const auto& alpha = shape.coords()[i];
        std::vector<std::size_t> axes;
        for (std::size_t c = 0; c < alpha.dims(); ++c)
            for (unsigned e = 0; e < alpha[c]; ++e) axes.push_back(c);
        if (axes.empty()) {
            out[i] = f(directions[0], 0.0);
        } else if (axes.size() == 1) {
            out[i] = f.first(directions[axes[0]], steps.first);
        } else if (axes[0] == axes[1]) {
            out[i] = pure[axes[0]];
        } else {
            const double both = f.second(add(directions[axes[0]], directions[axes[1]]), steps.second);
            out[i] = (both - pure[axes[0]] - pure[axes[1]]) / 2;
        }
    }
    return out;
}

JetVector iterated_dual_jet(const FirstOrderProgram& program, std::span<const double> point,
                            std::span<const double> direction, unsigned order, const Registry* registry)
{
    if (order < 1 || order > 2) throw std::invalid_argument("iterated_dual_jet supports orders 1 and 2");
    if (point.size() != program.ctx.size() || direction.size() != point.size())
        throw std::invalid_argument("iterated_dual_jet: point/direction size does not match the program");
    const auto dual = MacroConfig::full(1, 1, registry);
    Term t = d_term(dual, program.body);
    if (order == 2) t = d_term(dual, t);

    Env env;
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double p = point[i], v = direction[i];
        Value seed = order == 1 ? Value::tuple({Value::real(p), Value::real(v)})
                                : Value::tuple({Value::tuple({Value::real(p), Value::real(v)}),
                                                Value::tuple({Value::real(v), Value::real(0.0)})});
        env = env.bind(program.ctx.entries()[i].first, seed);
    }
    Value r = eval(env, t, registry);
    if (order == 1) return JetVector(JetShape::full(1, 1), {r.items()[0].as_real(), r.items()[1].as_real()});
    // <<f, f'v>, <f'v, f''vv>>
    return JetVector(JetShape::full(1, 2), {r.items()[0].items()[0].as_real(), r.items()[0].items()[1].as_real(),
                                            r.items()[1].items()[1].as_real()});
}

double mixed_partial_recovery_12(const FirstOrderProgram& program, std::span<const double> point,
                                 const Registry* registry)
{
    if (program.ctx.size() != 2 || point.size() != 2)
        throw std::invalid_argument("mixed_partial_recovery_12 needs a program of exactly two real variables");
    const auto cfg = MacroConfig::full(1, 2, registry);
    const auto shape = cfg.shape();
    const Term t = d_term(cfg, program.body);
    auto h = [&](double v1, double v2) {
        std::vector<JetVector> seeds{JetVector(shape, {point[0], v1, 0.0}), JetVector(shape, {point[1], v2, 0.0})};
        return eval_transformed(cfg, t, program.ctx, seeds)[2];
    };
    return 0.5 * (h(1, 1) - h(1, 0) - h(0, 1));
}

} // namespace jetad::oracle
