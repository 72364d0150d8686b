#pragma once

// The odd analytic function
//
//   f_m(z) = (2m-3) sin z - z cos z + 2 sum_{k=1}^{m-2} (-1)^k (m-k-1) z^(2k-1) / (2k-1)!
//
// shared by the fundamental solution G_m(x) = (-1)^m sign(x) f_m(omega x) / (4 omega^(2m-1))
// and the leading coefficient of the characteristic polynomial (f_m(h omega)).
//
// The polynomial part cancels the Taylor expansion of the trigonometric part
// through order 2m-3, so f_m(z) = O(z^(2m-1)); near the origin the direct form
// loses ~(2m-2) log10(1/|z|) digits. There we sum the remaining Taylor series
//
//   f_m(z) = sum_{n >= m-1} (-1)^n 2 (m-2-n) z^(2n+1) / (2n+1)!

#include "k2pm/numeric.hpp"

namespace k2pm {

namespace detail {

// d^j/dz^j sin z and cos z with the quarter-period phase applied exactly.
template <RealScalar Real>
Real sin_derivative(const Real& s, const Real& c, int j) {
  switch (((j % 4) + 4) % 4) {
    case 0: return s;
    case 1: return c;
    case 2: return -s;
    default: return -c;
  }
}

template <RealScalar Real>
Real cos_derivative(const Real& s, const Real& c, int j) {
  switch (((j % 4) + 4) % 4) {
    case 0: return c;
    case 1: return -s;
    case 2: return -c;
    default: return s;
  }
}

template <RealScalar Real>
Real bracket_series(int m, const Real& z, int j) {
  using std::abs;
  Real sum(0);
  int small_terms = 0;
  int n = m - 1;
  while (2 * n + 1 - j < 0) ++n;
  int e = 2 * n + 1 - j;
  Real power = ipow(z, e) / factorial<Real>(e);  // z^e / e!, advanced two orders per step
  const Real z2 = z * z;
  for (bool first = true; n <= m + 200; ++n, e += 2, first = false) {
    if (!first) power = power * z2 / (Real(e) * Real(e - 1));
    const int coef = ((n % 2 == 0) ? 2 : -2) * (m - 2 - n);
    const Real term = Real(coef) * power;
    sum += term;
    if (abs(term) <= machine_epsilon<Real>() * abs(sum) / 4) {
      if (++small_terms >= 2 && 2 * n + 1 > abs(z)) break;
    } else {
      small_terms = 0;
    }
  }
  return sum;
}

template <RealScalar Real>
Real bracket_direct(int m, const Real& z, int j) {
  using std::cos;
  using std::sin;
  const Real s = sin(z);
  const Real c = cos(z);
  // d^j [z cos z] = z cos^(j) z + j cos^(j-1) z
  Real value = Real(2 * m - 3) * sin_derivative(s, c, j) - z * cos_derivative(s, c, j);
  if (j >= 1) value -= Real(j) * cos_derivative(s, c, j - 1);
  for (int k = 1; k <= m - 2; ++k) {
    const int e = 2 * k - 1;
    if (e < j) continue;
    const int coef = ((k % 2 == 0) ? 2 : -2) * (m - k - 1);
    value += Real(coef) * ipow(z, e - j) / factorial<Real>(e - j);
  }
  return value;
}

}  // namespace detail

/// j-th derivative of f_m at z. Uses the Taylor form for |z| < max(4, m).
template <RealScalar Real>
Real kernel_bracket(int m, const Real& z, int j = 0) {
  using std::abs;
  if (m < 2) throw ConfigError("kernel_bracket: m must be >= 2");
  if (j < 0) throw std::invalid_argument("kernel_bracket: negative derivative order");
  const Real threshold = Real(m > 4 ? m : 4);
  return abs(z) < threshold ? detail::bracket_series(m, z, j) : detail::bracket_direct(m, z, j);
}

}  // namespace k2pm
