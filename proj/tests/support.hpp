#pragma once

#include "k2pm/discrete_operator.hpp"

#include <cmath>

namespace test {

using k2pm::quad;

inline double d(const quad& x) { return k2pm::to_double(x); }

inline double rel_err(const quad& a, const quad& b) {
  const quad scale = abs(b) > quad(1e-300) ? quad(abs(b)) : quad(1);
  return d(abs(a - b) / scale);
}

// Configuration with h*omega = t on n intervals.
template <class Real = quad>
k2pm::SplineConfig<Real> with_h_omega(int m, double t, int n) {
  return k2pm::SplineConfig<Real>{m, Real(t) * Real(n), n};
}

}  // namespace test
