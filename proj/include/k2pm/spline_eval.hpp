#pragma once

// Pointwise evaluation of the spline and its semi-norm
//   ||S|| = ( int_0^1 (S^(m)(x) + omega^2 S^(m-2)(x))^2 dx )^(1/2).

#include "k2pm/fundamental_solution.hpp"
#include "k2pm/spline_builder.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <vector>

namespace k2pm {

/// S(x). Points outside [0, 1] are rejected unless allow_extrapolation.
template <RealScalar Real>
Real evaluate(const SplineConfig<Real>& cfg, const SplineCoefficients<Real>& coeffs, const Real& x,
              bool allow_extrapolation = false) {
  using std::cos;
  using std::sin;
  if (!allow_extrapolation && !(x >= 0 && x <= 1)) throw std::domain_error("evaluate: x outside [0, 1]");
  Real s(0);
  for (int g = 0; g <= cfg.n; ++g) s += coeffs.C[g] * G(cfg.m, cfg.omega, x - cfg.node(g));
  s += coeffs.d1 * sin(cfg.omega * x) + coeffs.d2 * cos(cfg.omega * x);
  Real xp(1);
  for (const auto& r : coeffs.r) {
    s += r * xp;
    xp *= x;
  }
  return s;
}

/// j-th derivative of S at a point that is not a node.
template <RealScalar Real>
Real evaluate_derivative(const SplineConfig<Real>& cfg, const SplineCoefficients<Real>& coeffs, int j, const Real& x) {
  using std::cos;
  using std::sin;
  Real s(0);
  for (int g = 0; g <= cfg.n; ++g) s += coeffs.C[g] * G_derivative(cfg.m, cfg.omega, j, x - cfg.node(g));
  const Real wx = cfg.omega * x;
  const Real wj = ipow(cfg.omega, j);
  s += wj * (coeffs.d1 * detail::sin_derivative(sin(wx), cos(wx), j) +
             coeffs.d2 * detail::cos_derivative(sin(wx), cos(wx), j));
  for (int a = j; a < static_cast<int>(coeffs.r.size()); ++a)
    s += coeffs.r[a] * (factorial<Real>(a) / factorial<Real>(a - j)) * ipow(x, a - j);
  return s;
}

/// eta(x) = sum_i a_i cos(k_i x) + b_i sin(k_i x), a smooth perturbation for
/// minimality checks.
template <RealScalar Real>
struct TrigSeries {
  std::vector<Real> frequency, cos_amplitude, sin_amplitude;

  Real derivative(int j, const Real& x) const {
    using std::cos;
    using std::sin;
    Real s(0);
    for (std::size_t i = 0; i < frequency.size(); ++i) {
      const Real kx = frequency[i] * x;
      const Real sk = sin(kx), ck = cos(kx);
      s += ipow(frequency[i], j) *
           (cos_amplitude[i] * detail::cos_derivative(sk, ck, j) + sin_amplitude[i] * detail::sin_derivative(sk, ck, j));
    }
    return s;
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
template <RealScalar Real>
std::pair<std::vector<Real>, std::vector<Real>> gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  const std::vector<Real> half = boost::math::legendre_p_zeros<Real>(points);
  std::vector<Real> x, w;
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (*it == Real(0)) continue;
    x.push_back(-*it);
  }
  for (const auto& z : half) x.push_back(z);
  for (const auto& z : x) {
    const Real dp = boost::math::legendre_p_prime(points, z);
    w.push_back(Real(2) / ((Real(1) - z * z) * dp * dp));
  }
  return {x, w};
}

/// Composite Gauss-Legendre semi-norm of S (+ eta if given), with
/// max(8, ceil(quad_points / N)) points on each internode cell.
template <RealScalar Real>
Real seminorm(const SplineConfig<Real>& cfg, const SplineCoefficients<Real>& coeffs, int quad_points,
              const TrigSeries<Real>* eta = nullptr) {
  using std::sqrt;
  if (quad_points < 10 * (cfg.n + 1)) throw std::invalid_argument("seminorm: need quad_points >= 10(N+1)");
  const int per_cell = std::max(8, (quad_points + cfg.n - 1) / cfg.n);
  const auto [xs, ws] = gauss_legendre<Real>(per_cell);
  const int m = cfg.m;
  const Real w2 = cfg.omega * cfg.omega;
  const Real half_h = cfg.h() / 2;
  Real total(0);
  for (int cell = 0; cell < cfg.n; ++cell) {
    const Real mid = (cfg.node(cell) + cfg.node(cell + 1)) / 2;
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const Real x = mid + half_h * xs[q];
      Real v = evaluate_derivative(cfg, coeffs, m, x) + w2 * evaluate_derivative(cfg, coeffs, m - 2, x);
      if (eta) v += eta->derivative(m, x) + w2 * eta->derivative(m - 2, x);
      total += ws[q] * half_h * v * v;
    }
  }
  return sqrt(total);
}

}  // namespace k2pm
