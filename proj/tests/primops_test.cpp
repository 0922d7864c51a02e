#include <jetad/parser.hpp>
#include <jetad/primops.hpp>
#include <jetad/syntax.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace jetad;

TEST(Builtins, DerivativeTables)
{
    const auto& reg = default_registry();
    EXPECT_TRUE(alpha_eq(reg.derivative("+", MultiIndex{1, 0}), mk::lit(1)));
    EXPECT_TRUE(alpha_eq(reg.derivative("+", MultiIndex{1, 1}), mk::lit(0)));
    EXPECT_TRUE(alpha_eq(reg.derivative("*", MultiIndex{1, 0}), mk::var("x2")));
    EXPECT_TRUE(alpha_eq(reg.derivative("*", MultiIndex{0, 1}), mk::var("x1")));
    EXPECT_TRUE(alpha_eq(reg.derivative("*", MultiIndex{1, 1}), mk::lit(1)));
    EXPECT_TRUE(alpha_eq(reg.derivative("*", MultiIndex{2, 0}), mk::lit(0)));
    EXPECT_TRUE(alpha_eq(reg.derivative("sigmoid", MultiIndex{1}), parse_term("let y = sigmoid(x1) in y * (1 - y)")));
    EXPECT_TRUE(alpha_eq(reg.derivative("sigmoid", MultiIndex{2}),
                         parse_term("let y = sigmoid(x1) in let z = y * (1 - y) in z * (1 - 2 * y)")));
    EXPECT_TRUE(alpha_eq(reg.derivative_by_slots("*", {1, 0}), reg.derivative("*", MultiIndex{1, 1})));
}

TEST(Builtins, Numerics)
{
    const auto& reg = default_registry();
    double args[] = {0.0};
    EXPECT_DOUBLE_EQ(reg.at("sigmoid").numeric(args), 0.5);
    double two[] = {3.0, 4.0};
    EXPECT_EQ(reg.at("*").numeric(two), 12.0);
    EXPECT_EQ(reg.at("+").numeric(two), 7.0);
}

TEST(Builtins, OrderLimit)
{
    EXPECT_NO_THROW(builtin_registry(1));
    EXPECT_EQ(builtin_registry(1).at("*").derivatives.size(), 2U);
    EXPECT_THROW(builtin_registry(3), RegistryError);
}

TEST(Registry, RejectsIncompleteOrIllTypedTables)
{
    Registry reg = builtin_registry(2);
    auto f = [](std::span<const double> a) { return a[0]; };
    EXPECT_THROW(reg.register_op({"g", 1, f, {{MultiIndex{1}, mk::lit(1)}}}), RegistryError);
    EXPECT_THROW(reg.register_op({"g", 1, f, {{MultiIndex{1}, mk::lit(1)}, {MultiIndex{2}, mk::var("x2")}}}),
                 RegistryError);
    EXPECT_THROW(reg.register_op({"g", 1, f, {{MultiIndex{1}, mk::op("h", {})}, {MultiIndex{2}, mk::lit(0)}}}),
                 RegistryError);
    EXPECT_THROW(reg.register_op({"g", 1, f, {{MultiIndex{1}, mk::tuple({mk::lit(1)})}, {MultiIndex{2}, mk::lit(0)}}}),
                 RegistryError);
    EXPECT_NO_THROW(reg.register_op({"g", 1, f, {{MultiIndex{1}, mk::op("g", {mk::var("x1")})}, {MultiIndex{2}, mk::lit(0)}}}));
    EXPECT_THROW(reg.register_op({"g", 1, f, {{MultiIndex{1}, mk::lit(1)}, {MultiIndex{2}, mk::lit(0)}}}), RegistryError);
}

TEST(OpFile, LoadsLibraryAndDefinedOps)
{
    Registry reg = builtin_registry(2);
    load_op_file(R"(
        -- exponential
        op exp/1
          deriv 1 = exp(x1)
          deriv 2 = exp(x1)
        op sq/1 = x1 * x1
          deriv 1 = 2 * x1
          deriv 2 = 2
    )",
                 reg);
    double a[] = {1.0};
    EXPECT_DOUBLE_EQ(reg.at("exp").numeric(a), std::exp(1.0));
    double b[] = {3.0};
    EXPECT_DOUBLE_EQ(reg.at("sq").numeric(b), 9.0);
    EXPECT_THROW(load_op_file("op mystery/1 deriv 1 = 1 deriv 2 = 0", reg), ParseError);
    EXPECT_THROW(load_op_file("op cube/1 = x1 * x1 * x1 deriv 1 = 3 * x1 * x1", reg), RegistryError);
}
