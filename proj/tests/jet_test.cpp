#include <jetad/jet.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace jetad;

TEST(JetShape, ArityMatchesBinomial)
{
    const std::map<std::pair<std::size_t, unsigned>, std::size_t> expected{
        {{1, 1}, 2}, {{1, 2}, 3}, {{2, 1}, 3}, {{2, 2}, 6}, {{3, 2}, 10}};
    for (const auto& [kr, n] : expected) EXPECT_EQ(JetShape::full(kr.first, kr.second).size(), n);
    EXPECT_EQ(JetShape::restricted22().size(), 4U);
    EXPECT_THROW(JetShape::full(0, 1), std::invalid_argument);
}

TEST(JetShape, IndexOf)
{
    auto s = JetShape::full(2, 2);
    EXPECT_EQ(s.index_of(MultiIndex{1, 1}), 4U);
    EXPECT_FALSE(s.index_of(MultiIndex{2, 1}).has_value());
    auto r = JetShape::restricted22();
    EXPECT_EQ(r.index_of(MultiIndex{1, 1}), 3U);
    EXPECT_FALSE(r.index_of(MultiIndex{2, 0}).has_value());
}

namespace {

// Coefficient of d^beta g * prod factors, keyed by a canonical string.
std::map<std::string, long long> fdb_table(const MultiIndex& alpha, std::size_t l)
{
    std::map<std::string, long long> out;
    for (const auto& t : enumerate_fdb(alpha, l)) {
        std::string key = "g" + t.beta.digits();
        for (const auto& f : t.factors) {
            key += " f" + f.part.digits() + "^";
            for (auto e : f.exponents) key += std::to_string(e);
        }
        out[key] += t.integer_coefficient();
    }
    return out;
}

} // namespace

TEST(FaaDiBruno, UnivariateFourthOrder)
{
    // (g o f)'''' = g' f'''' + 4 g'' f' f''' + 3 g'' f''^2 + 6 g''' f'^2 f'' + g'''' f'^4
    auto table = fdb_table(MultiIndex{4}, 1);
    const std::map<std::string, long long> expected{
        {"g1 f4^1", 1}, {"g2 f1^1 f3^1", 4}, {"g2 f2^2", 3}, {"g3 f1^2 f2^1", 6}, {"g4 f1^4", 1}};
    EXPECT_EQ(table, expected);
}

TEST(FaaDiBruno, MixedSecondOrderTwoSlots)
{
    // d11 g(f1, f2) = sum_j g_j f_j,11 + sum_{i,j} g_ij f_i,10 f_j,01
    auto table = fdb_table(MultiIndex{1, 1}, 2);
    const std::map<std::string, long long> expected{
        {"g10 f11^10", 1},          {"g01 f11^01", 1},          {"g20 f01^10 f10^10", 1},
        {"g11 f01^10 f10^01", 1},   {"g11 f01^01 f10^10", 1},   {"g02 f01^01 f10^01", 1}};
    EXPECT_EQ(table, expected);
}

TEST(FaaDiBruno, TermOrderStartsWithFirstSlot)
{
    const auto& terms = enumerate_fdb(MultiIndex{1}, 2);
    ASSERT_EQ(terms.size(), 2U);
    EXPECT_EQ(terms[0].beta, (MultiIndex{1, 0}));
    EXPECT_EQ(terms[1].beta, (MultiIndex{0, 1}));
    EXPECT_TRUE(enumerate_fdb(MultiIndex{2}, 0).empty());
    EXPECT_THROW(enumerate_fdb(MultiIndex{0}, 1), std::invalid_argument);
}

TEST(ComposeJets, MultiplicationGolden)
{
    // (2,2) product of jets x and y.
    auto shape = JetShape::full(2, 2);
    JetVector x(shape, {1.5, -0.5, 2.0, 0.25, 3.0, -1.0});
    JetVector y(shape, {-2.0, 0.75, 1.25, -3.0, 0.5, 4.0});
    std::map<MultiIndex, double> g{{{0, 0}, x[0] * y[0]}, {{1, 0}, y[0]}, {{0, 1}, x[0]},
                                   {{2, 0}, 0.0},         {{1, 1}, 1.0},  {{0, 2}, 0.0}};
    std::vector<JetVector> args{x, y};
    auto z = compose_jets(g, args, shape);
    const double expected[] = {
        x[0] * y[0],
        x[0] * y[1] + x[1] * y[0],
        x[2] * y[0] + 2 * x[1] * y[1] + x[0] * y[2],
        x[0] * y[3] + x[3] * y[0],
        x[4] * y[0] + x[1] * y[3] + x[3] * y[1] + x[0] * y[4],
        x[5] * y[0] + 2 * x[3] * y[3] + x[0] * y[5],
    };
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(z[i], expected[i], 1e-12 * std::max(1.0, std::abs(expected[i])));
}

TEST(ComposeJets, MissingDerivativeThrows)
{
    auto shape = JetShape::full(1, 1);
    JetVector x(shape, {1.0, 1.0});
    std::vector<JetVector> args{x};
    EXPECT_THROW(compose_jets({{{0}, 1.0}}, args, shape), std::invalid_argument);
}

TEST(SeedAffine, PlacesDirectionsOnUnitCoords)
{
    auto shape = JetShape::full(2, 2);
    std::vector<double> point{1.0, 2.0};
    auto jets = seed_affine(point, {{0.5, 0.0}, {0.0, -1.0}}, shape);
    ASSERT_EQ(jets.size(), 2U);
    EXPECT_EQ(jets[0].at(MultiIndex{0, 0}), 1.0);
    EXPECT_EQ(jets[0].at(MultiIndex{1, 0}), 0.5);
    EXPECT_EQ(jets[0].at(MultiIndex{0, 1}), 0.0);
    EXPECT_EQ(jets[1].at(MultiIndex{0, 1}), -1.0);
    EXPECT_EQ(jets[1].at(MultiIndex{1, 1}), 0.0);
}

TEST(JetJson, RoundTrip)
{
    JetVector j(JetShape::restricted22(), {1.0, 2.0, 3.0, 4.0});
    auto js = to_json(j);
    EXPECT_EQ(js["mode"], "restricted22");
    EXPECT_EQ(js["coeffs"]["11"], 4.0);
    auto back = jet_from_json(js);
    EXPECT_TRUE(back.shape() == j.shape());
    EXPECT_EQ(back[3], 4.0);
}
