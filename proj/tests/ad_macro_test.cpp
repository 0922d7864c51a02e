#include <jetad/ad_macro.hpp>
#include <jetad/eval.hpp>
#include <jetad/parser.hpp>
#include <jetad/primops.hpp>
#include <jetad/printer.hpp>
#include <jetad/syntax.hpp>
#include <jetad/typecheck.hpp>

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace jetad;

namespace {

Context reals(std::initializer_list<const char*> names)
{
    Context ctx;
    for (const auto* n : names) ctx.add(n, Type::real());
    return ctx;
}

JetVector random_jet(const JetShape& shape, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2, 2);
    JetVector j(shape);
    for (std::size_t i = 0; i < shape.size(); ++i) j[i] = u(rng);
    return j;
}

// f(x1, x2) = x1^2 x2 + sigmoid(x2), with hand-written partials.
Registry poly_registry()
{
    auto reg = builtin_registry(2);
    load_op_file(R"(
op f/2 = x1 * x1 * x2 + sigmoid(x2)
  deriv 10 = 2 * x1 * x2
  deriv 01 = x1 * x1 + sigmoid(x2) * (1 - sigmoid(x2))
  deriv 20 = 2 * x2
  deriv 11 = 2 * x1
  deriv 02 = let y = sigmoid(x2) in y * (1 - y) * (1 - 2 * y)
)",
                 reg);
    return reg;
}

struct Partials
{
    double d1, d2, d11, d12, d22;
};

Partials partials_of_f(double a, double b)
{
    const double s = 1 / (1 + std::exp(-b));
    return {2 * a * b, a * a + s * (1 - s), 2 * b, 2 * a, s * (1 - s) * (1 - 2 * s)};
}

bool has_function(const Type& t)
{
    if (t.is_function()) return true;
    if (t.is_list()) return has_function(t.element());
    for (const auto& c : t.components())
        if (has_function(c)) return true;
    return false;
}

} // namespace

TEST(DType, RealBecomesTuple)
{
    const auto cfg = MacroConfig::full(2, 2);
    EXPECT_EQ(d_type(cfg, Type::real()), Type::real_power(6));
    EXPECT_EQ(d_type(MacroConfig::restricted22(), Type::real()), Type::real_power(4));
    EXPECT_EQ(d_type(MacroConfig::full(3, 2), Type::real()), Type::real_power(10));
}

TEST(DType, StructuralElsewhere)
{
    const auto cfg = MacroConfig::full(1, 1);
    const Type r2 = Type::real_power(2);
    EXPECT_EQ(d_type(cfg, parse_type("(real * real) -> list [A: real | B: (real * real)]")),
              Type::function(Type::product({r2, r2}),
                             Type::list(Type::variant({{"A", r2}, {"B", Type::product({r2, r2})}}))));
}

TEST(DTerm, ConstantIsPadded)
{
    const auto d = d_term(MacroConfig::full(1, 2), mk::lit(3));
    EXPECT_TRUE(alpha_eq(d, parse_term("<3, 0, 0>")));
}

TEST(DTerm, VariablesAreUnchanged)
{
    EXPECT_TRUE(alpha_eq(d_term(MacroConfig::full(2, 2), mk::var("x")), mk::var("x")));
}

TEST(DTerm, OneOneProductShape)
{
    const auto d = surface_names(d_term(MacroConfig::full(1, 1), parse_term("x * y")));
    EXPECT_TRUE(alpha_eq(d, parse_term("match x with <a0, a1> -> match y with <b0, b1> -> "
                                       "<a0 * b0, a1 * b0 + b1 * a0>")))
        << pretty(d);
}

TEST(DTerm, DualNumberProduct)
{
    const auto cfg = MacroConfig::full(1, 1);
    const std::vector<JetVector> seeds{JetVector(cfg.shape(), {3, 1}), JetVector(cfg.shape(), {5, 0})};
    const auto jet = eval_jet_program(cfg, parse_term("x * y"), reals({"x", "y"}), seeds);
    EXPECT_EQ(jet[0], 15.0);
    EXPECT_EQ(jet[1], 5.0);
}

TEST(DTerm, TripleNumberSquare)
{
    const auto cfg = MacroConfig::full(1, 2);
    for (double a : {-1.5, 0.0, 2.0}) {
        const std::vector<JetVector> seeds{JetVector(cfg.shape(), {a, 1, 0})};
        const auto jet = eval_jet_program(cfg, parse_term("x * x"), reals({"x"}), seeds);
        EXPECT_DOUBLE_EQ(jet[0], a * a);
        EXPECT_DOUBLE_EQ(jet[1], 2 * a);
        EXPECT_DOUBLE_EQ(jet[2], 2.0);
    }
}

TEST(DTerm, SigmoidTriple)
{
    const auto cfg = MacroConfig::full(1, 2);
    const std::vector<JetVector> seeds{JetVector(cfg.shape(), {0, 1, 0})};
    const auto jet = eval_jet_program(cfg, parse_term("sigmoid(x)"), reals({"x"}), seeds);
    EXPECT_NEAR(jet[0], 0.5, 1e-15);
    EXPECT_NEAR(jet[1], 0.25, 1e-15);
    EXPECT_NEAR(jet[2], 0.0, 1e-15);
}

TEST(DTerm, TwoTwoBindersInLexOrder)
{
    const auto d = surface_names(d_term(MacroConfig::full(2, 2), parse_term("sigmoid(x)")));
    const auto* m = d.as<node::TupleMatch>();
    ASSERT_NE(m, nullptr);
    ASSERT_EQ(m->binders.size(), 6U);
    const char* digits[] = {"00", "01", "02", "10", "11", "20"};
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(m->binders[i], std::string("x1_") + digits[i]);
    const auto* body = m->body.as<node::Tuple>();
    ASSERT_NE(body, nullptr);
    EXPECT_EQ(body->items.size(), 6U);
}

// The six slots of D(2,2)[f(x, y)] on arbitrary (non-affine) input jets.
TEST(DTerm, TwoTwoMatchesFormula)
{
    const auto reg = poly_registry();
    const auto cfg = MacroConfig::full(2, 2, &reg);
    const auto ctx = reals({"x", "y"});
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_jet(cfg.shape(), rng), y = random_jet(cfg.shape(), rng);
        const std::vector<JetVector> seeds{x, y};
        const auto jet = eval_jet_program(cfg, parse_term("f(x, y)", {&reg}), ctx, seeds);
        auto X = [&](const char* d) { return x.at(MultiIndex::from_digits(d)); };
        auto Y = [&](const char* d) { return y.at(MultiIndex::from_digits(d)); };
        const auto p = partials_of_f(X("00"), Y("00"));
        // sum_i v^i_a d_i + sum_{i,j} v^i_b v^j_c d_ij
        auto second = [&](const char* a, const char* b, const char* c) {
            return X(a) * p.d1 + Y(a) * p.d2 + X(b) * X(c) * p.d11 + X(b) * Y(c) * p.d12 + Y(b) * X(c) * p.d12 +
                   Y(b) * Y(c) * p.d22;
        };
        const double s = 1 / (1 + std::exp(-Y("00")));
        EXPECT_NEAR(jet.at(MultiIndex{0, 0}), X("00") * X("00") * Y("00") + s, 1e-12);
        EXPECT_NEAR(jet.at(MultiIndex{0, 1}), X("01") * p.d1 + Y("01") * p.d2, 1e-12);
        EXPECT_NEAR(jet.at(MultiIndex{1, 0}), X("10") * p.d1 + Y("10") * p.d2, 1e-12);
        EXPECT_NEAR(jet.at(MultiIndex{0, 2}), second("02", "01", "01"), 1e-12);
        EXPECT_NEAR(jet.at(MultiIndex{1, 1}), second("11", "10", "01"), 1e-12);
        EXPECT_NEAR(jet.at(MultiIndex{2, 0}), second("20", "10", "10"), 1e-12);
    }
}

// The restricted variant with cross terms sum_{i,i'} x^i_10 x^i'_01 d_{i,i'}.
TEST(DTerm, RestrictedMatchesFormula)
{
    const auto reg = poly_registry();
    const auto cfg = MacroConfig::restricted22(&reg);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_jet(cfg.shape(), rng), y = random_jet(cfg.shape(), rng);
        const std::vector<JetVector> seeds{x, y};
        const auto jet = eval_jet_program(cfg, parse_term("f(x, y)", {&reg}), reals({"x", "y"}), seeds);
        const auto p = partials_of_f(x[0], y[0]);
        const double want = x[3] * p.d1 + y[3] * p.d2 + x[2] * x[1] * p.d11 + x[2] * y[1] * p.d12 +
                            y[2] * x[1] * p.d12 + y[2] * y[1] * p.d22;
        EXPECT_NEAR(jet[1], x[1] * p.d1 + y[1] * p.d2, 1e-12);
        EXPECT_NEAR(jet[2], x[2] * p.d1 + y[2] * p.d2, 1e-12);
        EXPECT_NEAR(jet[3], want, 1e-12);
    }
}

TEST(DTerm, InnerProductDualNumbers)
{
    const auto cfg = MacroConfig::full(1, 1);
    Context ctx;
    ctx.add("t", parse_type("(real * real)"));
    ctx.add("s", parse_type("(real * real)"));
    const Term ip = parse_term("match t with <z1, z2> -> match s with <y1, y2> -> z1 * y1 + z2 * y2");
    const Term d = d_term(cfg, ip);
    EXPECT_EQ(infer(d_context(cfg, ctx), d), Type::real_power(2));
    const auto pair = [](double a, double b) { return Value::tuple({Value::real(a), Value::real(b)}); };
    // z = ((1, 2), (3, 4)), y = ((5, 6), (7, 8)) as (value, tangent) pairs.
    const Env env = Env{}
                        .bind("t", Value::tuple({pair(1, 2), pair(3, 4)}))
                        .bind("s", Value::tuple({pair(5, 6), pair(7, 8)}));
    const auto out = eval(env, d);
    EXPECT_EQ(out.items()[0].as_real(), 1 * 5 + 3 * 7);
    EXPECT_EQ(out.items()[1].as_real(), 1 * 6 + 2 * 5 + 3 * 8 + 4 * 7);
}

TEST(DTerm, InnerProductRestricted)
{
    const auto cfg = MacroConfig::restricted22();
    Context ctx;
    ctx.add("t", parse_type("(real * real)"));
    ctx.add("s", parse_type("(real * real)"));
    const Term ip = parse_term("match t with <z1, z2> -> match s with <y1, y2> -> z1 * y1 + z2 * y2");
    std::mt19937_64 rng(5);
    std::vector<JetVector> z, y;
    for (int i = 0; i < 2; ++i) {
        z.push_back(random_jet(cfg.shape(), rng));
        y.push_back(random_jet(cfg.shape(), rng));
    }
    const Env env = Env{}
                        .bind("t", Value::tuple({jet_value(z[0]), jet_value(z[1])}))
                        .bind("s", Value::tuple({jet_value(y[0]), jet_value(y[1])}));
    const auto out = jet_from_value(eval(env, d_term(cfg, ip)), cfg.shape());
    double want = 0;
    for (int i = 0; i < 2; ++i)
        want += z[i][3] * y[i][0] + z[i][0] * y[i][3] + z[i][2] * y[i][1] + z[i][1] * y[i][2];
    EXPECT_NEAR(out[3], want, 1e-12);
    EXPECT_NEAR(out[0], z[0][0] * y[0][0] + z[1][0] * y[1][0], 1e-12);
}

TEST(DTerm, CustomOpNeedsItsDerivatives)
{
    auto reg = builtin_registry(1);
    load_op_file("op g/1 = x1 * x1 deriv 1 = 2 * x1", reg);
    EXPECT_NO_THROW(d_term(MacroConfig::full(2, 1, &reg), parse_term("g(x)", {&reg})));
    EXPECT_THROW(d_term(MacroConfig::full(1, 2, &reg), parse_term("g(x)", {&reg})), MacroError);
}

TEST(Config, Validation)
{
    EXPECT_THROW(MacroConfig::full(0, 1).validate(), MacroError);
    EXPECT_THROW(MacroConfig::full(1, 0).validate(), MacroError);
    EXPECT_THROW(MacroConfig::full(1, 3).validate(), MacroError);
    auto bad = MacroConfig::restricted22();
    bad.k = 1;
    EXPECT_THROW(bad.validate(), MacroError);
    EXPECT_THROW(d_term_restricted22(MacroConfig::full(2, 2), mk::var("x")), MacroError);
}

TEST(Functorial, RandomTermsTypecheck)
{
    fuzz::TermGen gen(17, 5);
    for (int i = 0; i < 100; ++i) {
        const auto s = gen.sample();
        for (const auto& cfg : {MacroConfig::full(1, 1), MacroConfig::full(2, 2), MacroConfig::restricted22()})
            EXPECT_NO_THROW(check(d_context(cfg, s.ctx), d_term(cfg, s.term), d_type(cfg, s.type))) << pretty(s.term);
    }
}

TEST(Functorial, SurfaceOutputReparses)
{
    fuzz::TermGen gen(18, 5);
    for (int i = 0; i < 50; ++i) {
        const auto s = gen.sample();
        const auto cfg = MacroConfig::full(1, 2);
        const Term d = surface_names(d_term(cfg, s.term));
        const Term back = parse_term(pretty(d));
        EXPECT_TRUE(alpha_eq(back, d)) << pretty(d);
        EXPECT_NO_THROW(check(d_context(cfg, s.ctx), back, d_type(cfg, s.type)));
    }
}

TEST(Functorial, Substitution)
{
    fuzz::TermGen gen(19, 5);
    for (int i = 0; i < 100; ++i) {
        const auto s = gen.sample();
        const auto& [x, xt] = s.ctx.entries().front();
        fuzz::TermGen::Env env(s.ctx.entries().begin(), s.ctx.entries().end());
        const Term u = gen.term_of(xt, env, 3);
        const auto cfg = MacroConfig::full(2, 2);
        EXPECT_TRUE(alpha_eq(d_term(cfg, substitute(s.term, x, u)),
                             substitute(d_term(cfg, s.term), x, d_term(cfg, u))))
            << pretty(s.term);
    }
}

TEST(Normalize, ContractsTupleMatches)
{
    const Term t = parse_term("match <a, 2> with <p, q> -> p * q + p");
    EXPECT_TRUE(alpha_eq(normalize(t), parse_term("a * 2 + a")));
    // A non-trivial component used twice stays bound.
    const Term u = parse_term("match <a * b, 2> with <p, q> -> p * q + p");
    const Term n = normalize(u);
    EXPECT_TRUE(alpha_eq(n, parse_term("match <a * b> with <p> -> p * 2 + p"))) << pretty(n);
}

TEST(Normalize, ContractsLets)
{
    EXPECT_TRUE(alpha_eq(normalize(parse_term("let y = a * b in y + 1")), parse_term("a * b + 1")));
    EXPECT_TRUE(alpha_eq(normalize(parse_term("(fun y : real -> y * y) a")), parse_term("a * a")));
    const Term kept = parse_term("let y = a * b in y * y");
    EXPECT_TRUE(alpha_eq(normalize(kept), kept));
}

TEST(Normalize, PreservesValuesBitForBit)
{
    fuzz::TermGen gen(23, 5);
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
        const auto s = gen.sample();
        const auto cfg = MacroConfig::full(1, 2);
        const Term d = d_term(cfg, s.term);
        const Term n = normalize(d);
        EXPECT_TRUE(alpha_eq(normalize(n), n));
        EXPECT_NO_THROW(check(d_context(cfg, s.ctx), n, d_type(cfg, s.type)));
        Env env;
        for (const auto& [name, type] : s.ctx.entries()) {
            fuzz::TermGen::Env none;
            env = env.bind(name, eval({}, d_term(cfg, gen.term_of(type, none, 2))));
        }
        if (has_function(s.type)) continue;
        const auto a = eval(env, d), b = eval(env, n);
        ++compared;
        EXPECT_TRUE(bit_identical(a, b)) << pretty(s.term);
    }
    EXPECT_GT(compared, 100);
}
