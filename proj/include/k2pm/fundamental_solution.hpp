#pragma once

// G_m(x) = (-1)^m sign(x) f_m(omega x) / (4 omega^(2m-1)), the fundamental
// solution of the operator, and the discrete identity D_m * G_m = delta.

#include "k2pm/discrete_operator.hpp"
#include "k2pm/kernel_bracket.hpp"

namespace k2pm {

template <RealScalar Real>
Real G(int m, const Real& omega, const Real& x) {
  if (m < 2) throw ConfigError("G: m must be >= 2");
  if (!(omega > 0)) throw ConfigError("G: omega must be > 0");
  const int s = sign_of(x);
  if (s == 0) return Real(0);
  const Real value = kernel_bracket(m, omega * x) / (Real(4) * ipow(omega, 2 * m - 1));
  return (m % 2 == 0) == (s > 0) ? value : -value;
}

/// d^j G_m / dx^j for x != 0 (any x when j < 2m-4, where the derivative is
/// continuous and vanishes at the origin).
template <RealScalar Real>
Real G_derivative(int m, const Real& omega, int j, const Real& x) {
  if (m < 2) throw ConfigError("G_derivative: m must be >= 2");
  if (!(omega > 0)) throw ConfigError("G_derivative: omega must be > 0");
  if (j < 0 || j > 2 * m) throw std::invalid_argument("G_derivative: order must lie in [0, 2m]");
  const int s = sign_of(x);
  if (s == 0) {
    if (j >= 2 * m - 4) throw std::domain_error("G_derivative: x = 0 is singular for this order");
    return Real(0);
  }
  const Real value = kernel_bracket(m, omega * x, j) * ipow(omega, j) / (Real(4) * ipow(omega, 2 * m - 1));
  return (m % 2 == 0) == (s > 0) ? value : -value;
}

/// |sum_{|g| <= window} D(h g) G(h (beta - g)) - delta(beta)|.
template <RealScalar Real>
Real delta_residual(const DiscreteOperator<Real>& op, int beta, int window) {
  using std::abs;
  const auto& cfg = op.config;
  const Real h = cfg.h();
  Real sum(0);
  for (int g = -window; g <= window; ++g) sum += eval_D(op, g) * G(cfg.m, cfg.omega, h * Real(beta - g));
  return abs(sum - Real(beta == 0 ? 1 : 0));
}

}  // namespace k2pm
