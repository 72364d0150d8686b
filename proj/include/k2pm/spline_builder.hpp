#pragma once

// Interpolating spline in K2(P_m) on the uniform grid x_beta = beta/N:
//
//   S(x) = sum_g C_g G_m(x - x_g) + d1 sin(omega x) + d2 cos(omega x) + sum_a r_a x^a.
//
// The data are extended past [0,1] by two null-space branches
//   u^-(h b) = d1^- sin(h omega b) + d2^- cos(h omega b) + sum_a r_a^- (h b)^a,  b <= 0
//   u^+(h b) = d1^+ sin(h omega b) + d2^+ cos(h omega b) + sum_a r_a^+ (h b)^a,  b >= N
// chosen so that D_m * u vanishes outside [0, N]; then C = D_m * u. The
// branches are fixed by a (2m-2)x(2m-2) system whose entries are infinite
// sums over geometric tails, evaluated here in closed form.

#include "k2pm/discrete_operator.hpp"
#include "k2pm/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace k2pm {

template <RealScalar Real>
struct SampleSet {
  std::vector<Real> values;  // values[b] = phi(b h), b = 0..N

  void validate(const SplineConfig<Real>& cfg) const {
    using std::isfinite;
    if (static_cast<int>(values.size()) != cfg.n + 1)
      throw ConfigError("samples: expected " + std::to_string(cfg.n + 1) + " values, got " +
                        std::to_string(values.size()));
    for (const auto& v : values)
      if (!isfinite(v)) throw ConfigError("samples: non-finite value");
  }
};

template <RealScalar Real>
struct BoundarySolution {
  Real d1_minus = Real(0), d1_plus = Real(0);
  Real d2_minus = Real(0), d2_plus = Real(0);
  std::vector<Real> r_minus, r_plus;  // alpha = 0..m-3

  Real d1 = Real(0), d2 = Real(0);  // averages of the two branches
  std::vector<Real> r;
  Real D1 = Real(0), D2 = Real(0);  // half-differences
  std::vector<Real> q_coeffs;

  Real condition = Real(0);  // 1-norm estimate of the boundary matrix
};

template <RealScalar Real>
struct SplineCoefficients {
  std::vector<Real> C;
  Real d1 = Real(0), d2 = Real(0);
  std::vector<Real> r;
};

template <RealScalar Real>
struct BoundarySystem {
  DenseMatrix<Real> matrix;
  std::vector<Real> rhs;
};

/// Boundary matrices above this 1-norm condition estimate are flagged.
inline constexpr double kBoundaryConditionWarning = 1e10;
inline constexpr double kCosOmegaGuard = 1e-8;

template <RealScalar Real>
void validate_builder_config(const SplineConfig<Real>& cfg) {
  using std::abs;
  using std::cos;
  cfg.validate();
  if (abs(cos(cfg.omega)) < Real(kCosOmegaGuard)) throw ConfigError("|cos(omega)| < 1e-8");
}

namespace detail {

// Grid functions of g that appear in the extension branches.
template <RealScalar Real>
struct Atom {
  enum class Kind { sin, cos, power } kind;
  Real theta = Real(0);  // sin/cos: theta g + phase
  Real phase = Real(0);
  int power = 0;  // power: g^power (0^0 = 1)

  Real operator()(long long g) const {
    using std::cos;
    using std::sin;
    switch (kind) {
      case Kind::sin: return sin(theta * Real(g) + phase);
      case Kind::cos: return cos(theta * Real(g) + phase);
      default: return ipow(Real(g), power);
    }
  }

  Atom shifted(int b) const {
    Atom a = *this;
    a.phase = phase + theta * Real(b);
    return a;
  }
};

template <RealScalar Real>
struct Term {
  Real weight;
  Atom<Real> atom;
};

template <RealScalar Real>
using Combination = std::vector<Term<Real>>;

// Each unknown of the boundary system contributes a fixed combination of
// atoms to u^-(-g) or u^+(N+g), g >= 1, after d2^- and d2^+ are eliminated:
//   d2^- = phi(0) - r_0^-
//   d2^+ = phi(1)/cos w - d1^+ tan w - sum_a r_a^+ / cos w
template <RealScalar Real>
struct ExtensionBasis {
  std::vector<Combination<Real>> left, right;  // unknown order d1, r_0..r_{m-3}
  Combination<Real> left_known, right_known;   // data-dependent part
};

template <RealScalar Real>
ExtensionBasis<Real> extension_basis(const SplineConfig<Real>& cfg, const Real& phi_first, const Real& phi_last) {
  using std::cos;
  using K = typename Atom<Real>::Kind;
  const Real t = cfg.h_omega();
  const Real h = cfg.h();
  const Real cw = cos(cfg.omega);
  const Atom<Real> sin_t{K::sin, t, Real(0), 0};
  const Atom<Real> cos_t{K::cos, t, Real(0), 0};
  const Atom<Real> cos_tw{K::cos, t, cfg.omega, 0};
  auto pow_atom = [](int j) { return Atom<Real>{K::power, Real(0), Real(0), j}; };

  ExtensionBasis<Real> basis;
  basis.left.push_back({{Real(-1), sin_t}});
  basis.right.push_back({{Real(1) / cw, sin_t}});
  for (int a = 0; a <= cfg.m - 3; ++a) {
    if (a == 0)
      basis.left.push_back({{Real(1), pow_atom(0)}, {Real(-1), cos_t}});
    else
      basis.left.push_back({{ipow(-h, a), pow_atom(a)}});
    Combination<Real> right;
    for (int j = 0; j <= a; ++j) right.push_back({binomial<Real>(a, j) * ipow(h, j), pow_atom(j)});
    right.push_back({Real(-1) / cw, cos_tw});
    basis.right.push_back(std::move(right));
  }
  basis.left_known = {{phi_first, cos_t}};
  basis.right_known = {{phi_last / cw, cos_tw}};
  return basis;
}

// sum_{g>=1} lambda^g atom(g).
template <RealScalar Real>
Complex<Real> tail_from_one(const Complex<Real>& lambda, const Atom<Real>& a) {
  using K = typename Atom<Real>::Kind;
  if (a.kind == K::power) {
    Complex<Real> s = geom_power_tail(lambda, a.power);
    return a.power == 0 ? s - Complex<Real>(1) : s;
  }
  const auto [s, c] = geom_trig_tail(lambda, a.theta, a.phase);
  return a.kind == K::sin ? s : c;
}

// sum_{j>=0} lambda^j atom(b + j).
template <RealScalar Real>
Complex<Real> tail_from(const Complex<Real>& lambda, const Atom<Real>& a, int b) {
  using K = typename Atom<Real>::Kind;
  if (a.kind == K::power) {
    Complex<Real> s(0);
    for (int i = 0; i <= a.power; ++i)
      s += binomial<Real>(a.power, i) * ipow(Real(b), a.power - i) * geom_power_tail(lambda, i);
    return s;
  }
  const Atom<Real> moved = a.shifted(b);
  return Complex<Real>(moved(0)) + tail_from_one(lambda, moved);
}

// Accumulates a complex sum of conjugate-paired terms and its magnitude.
template <RealScalar Real>
struct PairedSum {
  Complex<Real> value{0};
  Real magnitude{0};

  void add(const Complex<Real>& z) {
    using std::abs;
    value += z;
    magnitude += abs(z);
  }
  void add(const Real& x) {
    using std::abs;
    value += x;
    magnitude += abs(x);
  }
  Real real(const char* what) const { return checked_real(value, magnitude, Real(1e-10), what); }
};

// (1/p) sum_{g>=1} D(g - b) atom(g), b >= 1.
template <RealScalar Real>
Real near_sum(const DiscreteOperator<Real>& op, const Atom<Real>& a, int b) {
  PairedSum<Real> s;
  if (b >= 2) s.add(a(b - 1));
  s.add(op.C * a(b));
  s.add(a(b + 1));
  for (int k = 0; k < op.terms(); ++k) {
    const auto& l = op.lambda[k];
    Complex<Real> inner = tail_from(l, a, b);
    for (int g = 1; g < b; ++g) inner += ipow(l, b - g) * a(g);
    s.add(op.A[k] / l * inner);
  }
  return s.real("near_sum");
}

// (1/p) sum_{g>=1} D(c + g) atom(g), c >= 1.
template <RealScalar Real>
Real far_sum(const DiscreteOperator<Real>& op, const Atom<Real>& a, int c) {
  PairedSum<Real> s;
  for (int k = 0; k < op.terms(); ++k)
    s.add(op.A[k] * ipow(op.lambda[k], c - 1) * tail_from_one(op.lambda[k], a));
  return s.real("far_sum");
}

template <RealScalar Real, class F>
Real combine(const Combination<Real>& terms, F&& eval) {
  Real s(0);
  for (const auto& term : terms) s += term.weight * eval(term.atom);
  return s;
}

// sum_g lambda^g phi_g and sum_g lambda^(N-g) phi_g for every root.
template <RealScalar Real>
std::pair<std::vector<Complex<Real>>, std::vector<Complex<Real>>> boundary_moments(const DiscreteOperator<Real>& op,
                                                                                   const SampleSet<Real>& samples) {
  const int n = static_cast<int>(samples.values.size()) - 1;
  std::vector<Complex<Real>> head(op.terms()), tail(op.terms());
  for (int k = 0; k < op.terms(); ++k) {
    const auto& l = op.lambda[k];
    Complex<Real> f(0), g(0);
    for (int i = n; i >= 0; --i) f = f * l + samples.values[i];
    for (int i = 0; i <= n; ++i) g = g * l + samples.values[i];
    head[k] = f;
    tail[k] = g;
  }
  return {head, tail};
}

}  // namespace detail

/// Boundary system in the unknowns [d1^-, r_0^-..r_{m-3}^-, d1^+, r_0^+..r_{m-3}^+].
/// Rows 0..m-2 state (D_m * u)(h beta) = 0 for beta = -1..-(m-1); rows
/// m-1..2m-3 do the same for beta = N+1..N+m-1.
template <RealScalar Real>
BoundarySystem<Real> assemble_boundary_system(const SplineConfig<Real>& cfg, const DiscreteOperator<Real>& op,
                                              const SampleSet<Real>& samples) {
  validate_builder_config(cfg);
  samples.validate(cfg);
  const int m = cfg.m;
  const int n = cfg.n;
  const int half = m - 1;
  const auto& phi = samples.values;
  const auto basis = detail::extension_basis(cfg, phi.front(), phi.back());
  const auto [head, tail] = detail::boundary_moments(op, samples);

  BoundarySystem<Real> sys{DenseMatrix<Real>(2 * half), std::vector<Real>(2 * half, Real(0))};
  for (int b = 1; b <= half; ++b) {
    auto near = [&](const detail::Atom<Real>& a) { return detail::near_sum(op, a, b); };
    auto far = [&](const detail::Atom<Real>& a) { return detail::far_sum(op, a, n + b); };

    detail::PairedSum<Real> left_data, right_data;
    if (b == 1) {
      left_data.add(phi.front());
      right_data.add(phi.back());
    }
    for (int k = 0; k < op.terms(); ++k) {
      const Complex<Real> w = op.A[k] * ipow(op.lambda[k], b - 1);
      left_data.add(w * head[k]);
      right_data.add(w * tail[k]);
    }

    const int row_left = b - 1;
    const int row_right = half + b - 1;
    for (int u = 0; u < half; ++u) {
      sys.matrix(row_left, u) = detail::combine(basis.left[u], near);
      sys.matrix(row_left, half + u) = detail::combine(basis.right[u], far);
      sys.matrix(row_right, u) = detail::combine(basis.left[u], far);
      sys.matrix(row_right, half + u) = detail::combine(basis.right[u], near);
    }
    sys.rhs[row_left] = -left_data.real("boundary rhs") - detail::combine(basis.left_known, near) -
                        detail::combine(basis.right_known, far);
    sys.rhs[row_right] = -right_data.real("boundary rhs") - detail::combine(basis.left_known, far) -
                         detail::combine(basis.right_known, near);
  }
  return sys;
}

template <RealScalar Real>
BoundarySolution<Real> solve_boundary(const SplineConfig<Real>& cfg, const DiscreteOperator<Real>& op,
                                      const SampleSet<Real>& samples) {
  using std::cos;
  using std::tan;
  const auto sys = assemble_boundary_system(cfg, op, samples);
  const int half = cfg.m - 1;
  const int nr = cfg.m - 2;

  std::vector<Real> x;
  BoundarySolution<Real> bs;
  try {
    DenseLU<Real> lu(sys.matrix);
    x = lu.solve(sys.rhs);
    bs.condition = lu.condition_estimate();
  } catch (const NumericError&) {
    throw NumericError("boundary system is numerically singular (expected a non-singular main matrix)");
  }

  const auto& phi = samples.values;
  bs.d1_minus = x[0];
  bs.d1_plus = x[half];
  bs.r_minus.assign(x.begin() + 1, x.begin() + 1 + nr);
  bs.r_plus.assign(x.begin() + half + 1, x.begin() + half + 1 + nr);
  bs.d2_minus = phi.front() - (nr > 0 ? bs.r_minus[0] : Real(0));
  Real r_plus_sum(0);
  for (const auto& v : bs.r_plus) r_plus_sum += v;
  bs.d2_plus = phi.back() / cos(cfg.omega) - bs.d1_plus * tan(cfg.omega) - r_plus_sum / cos(cfg.omega);

  bs.d1 = (bs.d1_plus + bs.d1_minus) / 2;
  bs.d2 = (bs.d2_plus + bs.d2_minus) / 2;
  bs.D1 = (bs.d1_plus - bs.d1_minus) / 2;
  bs.D2 = (bs.d2_plus - bs.d2_minus) / 2;
  for (int a = 0; a < nr; ++a) {
    bs.r.push_back((bs.r_plus[a] + bs.r_minus[a]) / 2);
    bs.q_coeffs.push_back((bs.r_plus[a] - bs.r_minus[a]) / 2);
  }
  return bs;
}

/// u(h beta): the left branch for beta < 0, the data on [0, N], the right
/// branch for beta > N.
template <RealScalar Real>
Real u_extension(const SplineConfig<Real>& cfg, const BoundarySolution<Real>& bs, const SampleSet<Real>& samples,
                 long long beta) {
  using std::cos;
  using std::sin;
  if (beta >= 0 && beta <= cfg.n) return samples.values[static_cast<std::size_t>(beta)];
  const bool left = beta < 0;
  const Real arg = cfg.h_omega() * Real(beta);
  const Real x = cfg.h() * Real(beta);
  Real value = (left ? bs.d1_minus : bs.d1_plus) * sin(arg) + (left ? bs.d2_minus : bs.d2_plus) * cos(arg);
  const auto& r = left ? bs.r_minus : bs.r_plus;
  for (std::size_t a = 0; a < r.size(); ++a) value += r[a] * ipow(x, static_cast<int>(a));
  return value;
}

/// M_k = sum_{g>=1} lambda_k^g u^-(-g h) and N_k = sum_{g>=1} lambda_k^g u^+((N+g) h).
template <RealScalar Real>
std::pair<std::vector<Complex<Real>>, std::vector<Complex<Real>>> compute_MN(const DiscreteOperator<Real>& op,
                                                                             const BoundarySolution<Real>& bs) {
  using std::cos;
  using std::sin;
  const auto& cfg = op.config;
  const Real t = cfg.h_omega();
  const Real h = cfg.h();
  const int nr = cfg.m - 2;
  using K = typename detail::Atom<Real>::Kind;
  using C = Complex<Real>;
  std::vector<C> M(op.terms()), N(op.terms());
  for (int k = 0; k < op.terms(); ++k) {
    const C& l = op.lambda[k];
    // u^-(-g h) = -d1^- sin(t g) + d2^- cos(t g) + sum_a r_a^- (-h)^a g^a
    const auto [s0, c0] = geom_trig_tail(l, t, Real(0));
    C mk = -bs.d1_minus * s0 + bs.d2_minus * c0;
    for (int a = 0; a < nr; ++a)
      mk += bs.r_minus[a] * ipow(-h, a) * detail::tail_from_one(l, detail::Atom<Real>{K::power, Real(0), Real(0), a});
    // u^+((N+g) h) = d1^+ sin(w + t g) + d2^+ cos(w + t g) + sum_a r_a^+ (1 + h g)^a
    const auto [sw, cw] = geom_trig_tail(l, t, cfg.omega);
    C nk = bs.d1_plus * sw + bs.d2_plus * cw;
    for (int a = 0; a < nr; ++a)
      for (int j = 0; j <= a; ++j)
        nk += bs.r_plus[a] * binomial<Real>(a, j) * ipow(h, j) *
              detail::tail_from_one(l, detail::Atom<Real>{K::power, Real(0), Real(0), j});
    M[k] = mk;
    N[k] = nk;
  }
  return {M, N};
}

/// C_beta = (D_m * u)(h beta) for beta = 0..N in O(N m), plus d1, d2, r.
template <RealScalar Real>
SplineCoefficients<Real> compute_coefficients(const SplineConfig<Real>& cfg, const DiscreteOperator<Real>& op,
                                              const BoundarySolution<Real>& bs, const SampleSet<Real>& samples) {
  using C = Complex<Real>;
  const int n = cfg.n;
  const auto& phi = samples.values;
  const auto [M, N] = compute_MN(op, bs);
  const int terms = op.terms();

  // Forward and backward geometric recursions, one pass per root:
  // S_k(b) = sum_g lambda_k^|b-g| phi_g = F(b) + B(b) - phi_b.
  std::vector<C> forward(static_cast<std::size_t>(n + 1) * terms);
  std::vector<C> backward(forward.size());
  for (int k = 0; k < terms; ++k) {
    const C& l = op.lambda[k];
    C acc(0);
    for (int b = 0; b <= n; ++b) forward[static_cast<std::size_t>(b) * terms + k] = acc = l * acc + phi[b];
    acc = C(0);
    for (int b = n; b >= 0; --b) backward[static_cast<std::size_t>(b) * terms + k] = acc = l * acc + phi[b];
  }

  // lambda^b M_k and lambda^(N-b) N_k. Both powers are built upwards from
  // lambda^0 so small roots underflow gracefully instead of dividing.
  std::vector<C> w_left(terms), pow_left(terms, C(1));
  std::vector<C> pow_right(forward.size());
  for (int k = 0; k < terms; ++k) {
    w_left[k] = op.A[k] / op.lambda[k];
    C acc(1);
    for (int b = n; b >= 0; --b) {
      pow_right[static_cast<std::size_t>(b) * terms + k] = acc;
      acc *= op.lambda[k];
    }
  }

  const Real u_before = u_extension(cfg, bs, samples, -1);
  const Real u_after = u_extension(cfg, bs, samples, static_cast<long long>(n) + 1);

  SplineCoefficients<Real> out;
  out.C.resize(n + 1);
  for (int b = 0; b <= n; ++b) {
    const Real prev = b == 0 ? u_before : phi[b - 1];
    const Real next = b == n ? u_after : phi[b + 1];
    // Pieces are added one by one so the residue check sees the scale
    // before cancellation (the sum vanishes for null-space data).
    detail::PairedSum<Real> s;
    s.add(prev);
    s.add(op.C * phi[b]);
    s.add(next);
    for (int k = 0; k < terms; ++k) {
      const std::size_t idx = static_cast<std::size_t>(b) * terms + k;
      s.add(w_left[k] * (forward[idx] - phi[b]));
      s.add(w_left[k] * backward[idx]);
      s.add(w_left[k] * pow_left[k] * M[k]);
      s.add(w_left[k] * pow_right[idx] * N[k]);
      pow_left[k] *= op.lambda[k];
    }
    out.C[b] = op.p * s.real("compute_coefficients");
  }
  out.d1 = bs.d1;
  out.d2 = bs.d2;
  out.r = bs.r;
  return out;
}

template <RealScalar Real>
struct SideConditionResiduals {
  Real sin = Real(0);  // |sum_g C_g sin(w x_g)|
  Real cos = Real(0);  // |sum_g C_g cos(w x_g)|
  std::vector<Real> power;  // |sum_g C_g x_g^a|, a = 0..m-3
  Real scale = Real(1);     // max(1, max_g |C_g|)

  Real max_scaled() const {
    Real worst = sin > cos ? sin : cos;
    for (const auto& v : power) worst = v > worst ? v : worst;
    return worst / scale;
  }
};

template <RealScalar Real>
SideConditionResiduals<Real> side_condition_residuals(const SplineConfig<Real>& cfg,
                                                      const SplineCoefficients<Real>& coeffs) {
  using std::abs;
  using std::cos;
  using std::sin;
  SideConditionResiduals<Real> out;
  Real s(0), c(0);
  std::vector<Real> pw(cfg.m - 2, Real(0));
  for (int g = 0; g <= cfg.n; ++g) {
    const Real x = cfg.node(g);
    s += coeffs.C[g] * sin(cfg.omega * x);
    c += coeffs.C[g] * cos(cfg.omega * x);
    Real xp(1);
    for (auto& v : pw) {
      v += coeffs.C[g] * xp;
      xp *= x;
    }
    out.scale = abs(coeffs.C[g]) > out.scale ? abs(coeffs.C[g]) : out.scale;
  }
  out.sin = abs(s);
  out.cos = abs(c);
  for (const auto& v : pw) out.power.push_back(abs(v));
  return out;
}

/// Truncated (D_m * u)(h beta) over |beta - g| <= window, with its absolute-value scale.
template <RealScalar Real>
ConvolutionResidual<Real> extension_residual(const SplineConfig<Real>& cfg, const DiscreteOperator<Real>& op,
                                             const BoundarySolution<Real>& bs, const SampleSet<Real>& samples,
                                             long long beta, int window) {
  using std::abs;
  Real sum(0), scale(0);
  for (int d = -window; d <= window; ++d) {
    const Real term = eval_D(op, d) * u_extension(cfg, bs, samples, beta - d);
    sum += term;
    scale += abs(term);
  }
  return {abs(sum), scale > 0 ? abs(sum) / scale : Real(0)};
}

/// max_beta |(D_m * u)(h beta) - C_beta| relative to the convolution scale,
/// using a truncated convolution instead of the closed forms.
template <RealScalar Real>
Real reconstruction_residual(const SplineConfig<Real>& cfg, const DiscreteOperator<Real>& op,
                             const BoundarySolution<Real>& bs, const SampleSet<Real>& samples,
                             const SplineCoefficients<Real>& coeffs, int window) {
  using std::abs;
  Real worst(0);
  for (int b = 0; b <= cfg.n; ++b) {
    Real sum(0), scale(0);
    for (int d = -window; d <= window; ++d) {
      const Real term = eval_D(op, d) * u_extension(cfg, bs, samples, static_cast<long long>(b) - d);
      sum += term;
      scale += abs(term);
    }
    const Real rel = abs(sum - coeffs.C[b]) / (scale > 0 ? scale : Real(1));
    worst = rel > worst ? rel : worst;
  }
  return worst;
}

template <RealScalar Real>
struct SplineBuild {
  SplineConfig<Real> config;
  DiscreteOperator<Real> op;
  BoundarySolution<Real> boundary;
  SplineCoefficients<Real> coeffs;
  SideConditionResiduals<Real> side;
  bool ill_conditioned = false;  // boundary condition estimate above kBoundaryConditionWarning
};

template <RealScalar Real>
SplineBuild<Real> build_spline(const SplineConfig<Real>& cfg, const SampleSet<Real>& samples) {
  validate_builder_config(cfg);
  samples.validate(cfg);
  SplineBuild<Real> out;
  out.config = cfg;
  out.op = build_operator(cfg);
  out.boundary = solve_boundary(cfg, out.op, samples);
  out.coeffs = compute_coefficients(cfg, out.op, out.boundary, samples);
  out.side = side_condition_residuals(cfg, out.coeffs);
  out.ill_conditioned = out.boundary.condition > Real(kBoundaryConditionWarning);
  return out;
}

}  // namespace k2pm
