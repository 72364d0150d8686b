#pragma once

// Reference solution: the full (N+m+1) linear system
//   sum_g C_g G(x_b - x_g) + d1 sin(w x_b) + d2 cos(w x_b) + sum_a r_a x_b^a = phi_b
//   sum_g C_g sin(w x_g) = 0,  sum_g C_g cos(w x_g) = 0,  sum_g C_g x_g^a = 0
// solved by dense LU. O(N^3) and independent of the discrete operator.

#include "k2pm/fundamental_solution.hpp"
#include "k2pm/linalg.hpp"
#include "k2pm/spline_builder.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace k2pm {

/// Unknown order [C_0..C_N, d1, d2, r_0..r_{m-3}]. Nodes may be non-uniform.
template <RealScalar Real>
BoundarySystem<Real> dense_system(int m, const Real& omega, const std::vector<Real>& nodes,
                                  const std::vector<Real>& samples) {
  using std::cos;
  using std::sin;
  if (m < 2) throw ConfigError("dense_system: m must be >= 2");
  if (!(omega > 0)) throw ConfigError("dense_system: omega must be > 0");
  if (nodes.size() != samples.size()) throw ConfigError("dense_system: nodes and samples differ in length");
  const int count = static_cast<int>(nodes.size());
  if (count < m) throw ConfigError("dense_system: need at least m nodes");
  for (int i = 1; i < count; ++i) {
    if (nodes[i] == nodes[i - 1]) throw ConfigError("dense_system: duplicate node");
    if (nodes[i] < nodes[i - 1]) throw ConfigError("dense_system: nodes must be increasing");
  }

  const int dim = count + m;
  BoundarySystem<Real> sys{DenseMatrix<Real>(dim), std::vector<Real>(dim, Real(0))};
  auto& a = sys.matrix;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) a(i, j) = G(m, omega, nodes[i] - nodes[j]);
    const Real s = sin(omega * nodes[i]);
    const Real c = cos(omega * nodes[i]);
    a(i, count) = s;
    a(i, count + 1) = c;
    a(count, i) = s;
    a(count + 1, i) = c;
    for (int al = 0; al < m - 2; ++al) {
      const Real xp = ipow(nodes[i], al);
      a(i, count + 2 + al) = xp;
      a(count + 2 + al, i) = xp;
    }
    sys.rhs[i] = samples[i];
  }
  return sys;
}

template <RealScalar Real>
struct DenseSolution {
  SplineCoefficients<Real> coeffs;
  Real condition = Real(0);
  Real residual = Real(0);  // ||Ax - b||_inf / max(||b||_inf, tiny)
};

template <RealScalar Real>
DenseSolution<Real> dense_solve(int m, const Real& omega, const std::vector<Real>& nodes,
                                const std::vector<Real>& samples) {
  using std::abs;
  const auto sys = dense_system(m, omega, nodes, samples);
  DenseSolution<Real> out;
  std::vector<Real> x;
  try {
    DenseLU<Real> lu(sys.matrix);
    x = lu.solve(sys.rhs);
    out.condition = lu.condition_estimate();
  } catch (const NumericError&) {
    throw NumericError("dense oracle: system is numerically singular (expected a unique solution)");
  }
  const auto ax = sys.matrix.multiply(x);
  Real res(0), bnorm(0);
  for (std::size_t i = 0; i < ax.size(); ++i) {
    res = std::max(res, Real(abs(ax[i] - sys.rhs[i])));
    bnorm = std::max(bnorm, Real(abs(sys.rhs[i])));
  }
  out.residual = bnorm > 0 ? res / bnorm : res;

  const int count = static_cast<int>(nodes.size());
  out.coeffs.C.assign(x.begin(), x.begin() + count);
  out.coeffs.d1 = x[count];
  out.coeffs.d2 = x[count + 1];
  out.coeffs.r.assign(x.begin() + count + 2, x.end());
  return out;
}

/// Dense solve on the uniform grid of cfg.
template <RealScalar Real>
DenseSolution<Real> dense_solve(const SplineConfig<Real>& cfg, const SampleSet<Real>& samples) {
  cfg.validate();
  samples.validate(cfg);
  std::vector<Real> nodes(cfg.n + 1);
  for (int b = 0; b <= cfg.n; ++b) nodes[b] = cfg.node(b);
  return dense_solve(cfg.m, cfg.omega, nodes, samples.values);
}

struct FamilyDeviation {
  double absolute = 0;  // max |a - b|
  double scaled = 0;    // absolute / max(1, max |b|)
};

struct ComparisonReport {
  FamilyDeviation C, d1, d2, r;
  double tolerance = 0;
  bool pass = false;

  double worst_scaled() const { return std::max({C.scaled, d1.scaled, d2.scaled, r.scaled}); }
};

/// Deviations of `a` from the reference `b`, family by family. A family
/// passes when its scaled deviation is within tolerance.
template <RealScalar Real>
ComparisonReport compare(const SplineCoefficients<Real>& a, const SplineCoefficients<Real>& b, double tolerance) {
  using std::abs;
  if (a.C.size() != b.C.size() || a.r.size() != b.r.size())
    throw std::invalid_argument("compare: coefficient shapes differ");
  auto family = [](const std::vector<Real>& x, const std::vector<Real>& y) {
    FamilyDeviation f;
    Real dev(0), scale(1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      dev = std::max(dev, Real(abs(x[i] - y[i])));
      scale = std::max(scale, Real(abs(y[i])));
    }
    f.absolute = to_double(dev);
    f.scaled = to_double(dev / scale);
    return f;
  };
  ComparisonReport rep;
  rep.C = family(a.C, b.C);
  rep.d1 = family({a.d1}, {b.d1});
  rep.d2 = family({a.d2}, {b.d2});
  rep.r = family(a.r, b.r);
  rep.tolerance = tolerance;
  rep.pass = rep.worst_scaled() <= tolerance;
  return rep;
}

}  // namespace k2pm
