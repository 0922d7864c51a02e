#pragma once

#include <jetad/eval.hpp>
#include <jetad/jet.hpp>

#include <span>
#include <vector>

namespace jetad::oracle {

struct FdSteps
{
    double first = 1e-4;
    double second = 5e-3;
};

/// Finite-difference jet of u |-> program(point + sum_c u_c directions[c])
/// at u = 0. First derivatives use the 5-point central stencil with step
/// `first`; pure second derivatives the 5-point second-difference stencil
/// with step `second`; mixed second derivatives are polarised from the pure
/// ones along d_c, d_d and d_c + d_d. Orders above 2 are rejected.
JetVector fd_jet(const FirstOrderProgram& program, std::span<const double> point,
                 const std::vector<std::vector<double>>& directions, const JetShape& shape, FdSteps steps = {},
                 const Registry* registry = nullptr);

/// Value, first and second directional derivatives along `direction` by
/// applying the (1,1) macro `order` times (order 1 or 2) and reading off the
/// nested dual numbers.
JetVector iterated_dual_jet(const FirstOrderProgram& program, std::span<const double> point,
                            std::span<const double> direction, unsigned order, const Registry* registry = nullptr);

/// The mixed partial d2g/dxdy of a two-variable program recovered from three
/// (1,2) jets: (h(e1+e2) - h(e1) - h(e2)) / 2 on the second-order slot.
double mixed_partial_recovery_12(const FirstOrderProgram& program, std::span<const double> point,
                                 const Registry* registry = nullptr);

} // namespace jetad::oracle
