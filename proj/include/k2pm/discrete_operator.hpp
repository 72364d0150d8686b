#pragma once

// Discrete analogue D_m(h beta) of the operator
//   d^{2m}/dx^{2m} + 2 omega^2 d^{2m-2}/dx^{2m-2} + omega^4 d^{2m-4}/dx^{2m-4}
// on the grid h*Z: the characteristic polynomial, its stable roots and the
// three-branch closed form
//
//   D(h beta) = p * { sum_k A_k lambda_k^(|beta|-1)   |beta| >= 2
//                   { 1 + sum_k A_k                   |beta| = 1
//                   { C + sum_k A_k / lambda_k        beta = 0

#include "k2pm/kernel_bracket.hpp"
#include "k2pm/poly_core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace k2pm {

template <RealScalar Real>
struct SplineConfig {
  int m = 2;            // operator order parameter
  Real omega = Real(1); // frequency
  int n = 1;            // nodes are x_beta = beta/n, beta = 0..n

  Real h() const { return Real(1) / Real(n); }
  Real h_omega() const { return omega / Real(n); }
  Real node(int beta) const { return Real(beta) / Real(n); }

  /// Throws ConfigError unless m >= 2, n >= m-1 (n+1 >= m), omega > 0 and
  /// h*omega <= 1.
  void validate() const {
    if (m < 2) throw ConfigError("m must be >= 2");
    if (n < 1) throw ConfigError("n must be >= 1");
    if (n + 1 < m) throw ConfigError("n+1 must be >= m");
    if (!(omega > 0)) throw ConfigError("omega must be > 0");
    if (omega > Real(n)) throw ConfigError("h*omega must be <= 1");
  }
};

/// Values-generating data of D_m(h beta). lambda and A are complex because the
/// stable roots may come in conjugate pairs.
template <RealScalar Real>
struct DiscreteOperator {
  SplineConfig<Real> config;
  Real p = Real(0);
  Real C = Real(0);
  std::vector<Complex<Real>> A;
  std::vector<Complex<Real>> lambda;
  RealPolynomial<Real> char_poly;

  int terms() const { return static_cast<int>(lambda.size()); }

  Real max_root_modulus() const {
    using std::abs;
    Real best(0);
    for (const auto& l : lambda) best = abs(l) > best ? abs(l) : best;
    return best;
  }
};

namespace detail {

// Polynomial in x whose coefficients are truncated power series in t:
// coef[s][j] multiplies x^s t^j.
template <RealScalar Real>
using SeriesPoly = std::vector<std::vector<Real>>;

template <RealScalar Real>
SeriesPoly<Real> series_poly_mul(const SeriesPoly<Real>& a, const SeriesPoly<Real>& b, int order) {
  SeriesPoly<Real> c(a.size() + b.size() - 1, std::vector<Real>(order + 1, Real(0)));
  for (std::size_t s1 = 0; s1 < a.size(); ++s1)
    for (std::size_t s2 = 0; s2 < b.size(); ++s2)
      for (int j1 = 0; j1 <= order; ++j1) {
        if (a[s1][j1] == Real(0)) continue;
        for (int j2 = 0; j1 + j2 <= order; ++j2) c[s1 + s2][j1 + j2] += a[s1][j1] * b[s2][j2];
      }
  return c;
}

template <RealScalar Real>
SeriesPoly<Real> constant_series_poly(const std::vector<Real>& coeffs, int order) {
  SeriesPoly<Real> c(coeffs.size(), std::vector<Real>(order + 1, Real(0)));
  for (std::size_t s = 0; s < coeffs.size(); ++s) c[s][0] = coeffs[s];
  return c;
}

template <RealScalar Real>
void series_poly_accumulate(SeriesPoly<Real>& into, const SeriesPoly<Real>& term) {
  if (into.size() < term.size()) into.resize(term.size(), std::vector<Real>(term[0].size(), Real(0)));
  for (std::size_t s = 0; s < term.size(); ++s)
    for (std::size_t j = 0; j < term[s].size(); ++j) into[s][j] += term[s][j];
}

template <RealScalar Real>
std::vector<Real> one_minus_x_power(int e) {
  std::vector<Real> c(e + 1);
  for (int s = 0; s <= e; ++s) c[s] = binomial<Real>(e, s) * Real((s % 2 == 0) ? 1 : -1);
  return c;
}

// Coefficient table (in x and t) of the characteristic polynomial. When
// `absolute` is set every input is replaced by its modulus, which yields a
// cancellation-free magnitude for each entry.
template <RealScalar Real>
SeriesPoly<Real> characteristic_series(int m, int order, bool absolute) {
  auto sgn = [absolute](int v) { return absolute ? 1 : v; };
  std::vector<Real> a(order + 1, Real(0)), b(order + 1, Real(0)), c(order + 1, Real(0));
  for (int n = 0; 2 * n + 1 <= order; ++n) {
    const int e = 2 * n + 1;
    const Real inv_fact_e = Real(1) / factorial<Real>(e);
    const Real inv_fact_e1 = Real(1) / factorial<Real>(e - 1);
    const int alt = (n % 2 == 0) ? 1 : -1;
    // (2m-3) sin t - t cos t
    if (absolute)
      a[e] = Real(2 * m - 3) * inv_fact_e + inv_fact_e1;
    else
      a[e] = Real(alt) * (Real(2 * m - 3) * inv_fact_e - inv_fact_e1);
    // 2t - (2m-3) sin 2t
    b[e] = Real(sgn(-alt)) * Real(2 * m - 3) * ipow(Real(2), e) * inv_fact_e;
    if (e == 1) b[e] += Real(2);
  }
  for (int n = 0; 2 * n <= order; ++n) c[2 * n] = Real(sgn((n % 2 == 0) ? 1 : -1)) / factorial<Real>(2 * n);

  auto abs_vec = [absolute](std::vector<Real> v) {
    using std::abs;
    if (absolute)
      for (auto& x : v) x = abs(x);
    return v;
  };

  // (1-x)^(2m-4) [a x^2 + b x + a]
  SeriesPoly<Real> bracket{a, b, a};
  SeriesPoly<Real> total =
      series_poly_mul(constant_series_poly(abs_vec(one_minus_x_power<Real>(2 * m - 4)), order), bracket, order);

  // 2 (x^2 - 2x cos t + 1)^2 sum_k (-1)^k (m-k-1) t^(2k-1)/(2k-1)! (1-x)^(2m-2k-4) E_{2k-2}(x)
  std::vector<Real> minus_two_cos(order + 1);
  for (int j = 0; j <= order; ++j) minus_two_cos[j] = Real(sgn(-2)) * c[j];
  std::vector<Real> one(order + 1, Real(0));
  one[0] = Real(1);
  SeriesPoly<Real> quad_factor{one, minus_two_cos, one};
  quad_factor = series_poly_mul(quad_factor, quad_factor, order);

  for (int k = 1; k <= m - 2; ++k) {
    const int e = 2 * k - 1;
    if (e > order) break;
    RealPolynomial<Real> ef = euler_frobenius<Real>(2 * k - 2);
    RealPolynomial<Real> base = RealPolynomial<Real>(one_minus_x_power<Real>(2 * m - 2 * k - 4)) * ef;
    SeriesPoly<Real> term = series_poly_mul(quad_factor, constant_series_poly(abs_vec(base.coeffs()), order), order);
    const Real weight = Real(sgn((k % 2 == 0) ? 2 : -2) * (m - k - 1)) / factorial<Real>(e);
    for (auto& row : term) {
      for (int j = order; j >= 0; --j) row[j] = (j >= e) ? weight * row[j - e] : Real(0);
    }
    series_poly_accumulate(total, term);
  }
  return total;
}

}  // namespace detail

/// The characteristic polynomial P_{2m-2}(x) of degree 2m-2.
///
/// Every coefficient is t^(2m-1) times an analytic function of t = h*omega
/// (the orders below 2m-1 cancel identically), so it is evaluated from its
/// power series in t, starting at order 2m-1. The dropped low orders are
/// checked to vanish against a cancellation-free magnitude table.
template <RealScalar Real>
RealPolynomial<Real> characteristic_poly(const SplineConfig<Real>& cfg) {
  using std::abs;
  cfg.validate();
  const int m = cfg.m;
  const int first = 2 * m - 1;
  const int order = first + 72;
  const auto series = detail::characteristic_series<Real>(m, order, false);
  const auto magnitude = detail::characteristic_series<Real>(m, order, true);
  const Real t = cfg.h_omega();

  std::vector<Real> coeffs(2 * m - 1, Real(0));
  for (int s = 0; s <= 2 * m - 2; ++s) {
    for (int j = 0; j < first; ++j)
      if (abs(series[s][j]) > Real(256) * machine_epsilon<Real>() * magnitude[s][j])
        throw std::logic_error("characteristic_poly: low-order series term does not cancel");
    Real acc(0);
    for (int j = order; j >= first; --j) acc = acc * t + series[s][j];
    coeffs[s] = acc * ipow(t, first);
  }
  return RealPolynomial<Real>(std::move(coeffs));
}

/// p_{2m-2}^{(2m-2)} = (2m-3) sin t - t cos t + 2 sum_k (-1)^k (m-k-1) t^(2k-1)/(2k-1)!,
/// t = h*omega. Throws NumericError if it is numerically zero.
template <RealScalar Real>
Real leading_coeff(const SplineConfig<Real>& cfg) {
  using std::abs;
  cfg.validate();
  const Real t = cfg.h_omega();
  const Real value = kernel_bracket(cfg.m, t);
  // Leading series term (-1)^m 2 t^(2m-1)/(2m-1)! sets the scale.
  const Real scale = Real(2) * ipow(t, 2 * cfg.m - 1) / factorial<Real>(2 * cfg.m - 1);
  if (!(abs(value) > Real(0.5) * scale) || !(abs(value) > std::numeric_limits<Real>::min()))
    throw NumericError("leading_coeff: degenerate (near-zero) leading coefficient");
  return value;
}

/// Roots of P strictly inside the unit disk. P is self-reciprocal, so its
/// 2m-2 roots pair as (lambda, 1/lambda); exactly half must lie inside.
template <RealScalar Real>
std::vector<Complex<Real>> stable_roots(const RealPolynomial<Real>& P, Real tol_circle = Real(1e-9)) {
  using std::abs;
  if (P.degree() < 2 || P.degree() % 2 != 0)
    throw std::invalid_argument("stable_roots: expected an even-degree characteristic polynomial");
  const auto roots = poly_roots(P);
  std::vector<Complex<Real>> inside;
  for (const auto& r : roots) {
    const Real mod = abs(r);
    if (abs(mod - Real(1)) <= tol_circle) throw NumericError("stable_roots: root on the unit circle");
    if (mod < Real(1)) inside.push_back(r);
  }
  if (static_cast<int>(inside.size()) != P.degree() / 2)
    throw NumericError("stable_roots: expected " + std::to_string(P.degree() / 2) + " roots inside the unit disk, found " +
                       std::to_string(inside.size()));
  // Deterministic order: by modulus, then argument.
  std::sort(inside.begin(), inside.end(), [](const Complex<Real>& x, const Complex<Real>& y) {
    using std::abs;
    if (abs(x) != abs(y)) return abs(x) < abs(y);
    return x.imag() < y.imag();
  });
  return inside;
}

template <RealScalar Real>
DiscreteOperator<Real> build_operator(const SplineConfig<Real>& cfg) {
  using std::abs;
  using std::cos;
  using C = Complex<Real>;
  cfg.validate();
  const int m = cfg.m;
  const Real t = cfg.h_omega();

  DiscreteOperator<Real> op;
  op.config = cfg;
  op.char_poly = characteristic_poly(cfg);
  const Real top = op.char_poly[2 * m - 2];
  const Real lead = leading_coeff(cfg);
  if (abs(top - lead) > Real(1e-10) * abs(lead))
    throw std::logic_error("build_operator: leading coefficient disagrees with characteristic polynomial");

  op.lambda = stable_roots(op.char_poly);
  const RealPolynomial<Real> dP = op.char_poly.derivative();
  const Real cos_t = cos(t);
  for (const C& l : op.lambda) {
    const C dpl = dP(l);
    if (abs(dpl) < Real(1e-14) * dP.magnitude_at(l)) throw NumericError("build_operator: repeated root");
    const C quadratic = l * l - Real(2) * l * cos_t + Real(1);
    op.A.push_back(ipow(C(1) - l, 2 * m - 4) * quadratic * quadratic * top / (l * dpl));
  }
  op.C = Real(4) - Real(4) * cos_t - Real(2 * m) - op.char_poly[2 * m - 3] / top;
  op.p = Real(2) * ipow(cfg.omega, 2 * m - 1) / (Real((m % 2 == 0) ? 1 : -1) * top);
  return op;
}

namespace detail {

// D(h beta)/p as a complex number (before discarding the imaginary residue)
// together with a cancellation-free magnitude.
template <RealScalar Real>
std::pair<Complex<Real>, Real> operator_value_over_p(const DiscreteOperator<Real>& op, int beta) {
  using std::abs;
  using C = Complex<Real>;
  const int b = beta < 0 ? -beta : beta;
  C value(0);
  Real magnitude(0);
  for (int k = 0; k < op.terms(); ++k) {
    C term = b >= 2 ? op.A[k] * ipow(op.lambda[k], b - 1) : (b == 1 ? op.A[k] : op.A[k] / op.lambda[k]);
    value += term;
    magnitude += abs(term);
  }
  if (b == 1) {
    value += C(1);
    magnitude += Real(1);
  } else if (b == 0) {
    value += C(op.C);
    magnitude += abs(op.C);
  }
  return {value, magnitude};
}

}  // namespace detail

/// D_m(h beta).
template <RealScalar Real>
Real eval_D(const DiscreteOperator<Real>& op, int beta) {
  const auto [value, magnitude] = detail::operator_value_over_p(op, beta);
  return op.p * checked_real(value, magnitude, Real(1e-10), "eval_D");
}

/// Imaginary residue of D(h beta) relative to its magnitude (0 for real roots).
template <RealScalar Real>
Real eval_D_imaginary_residue(const DiscreteOperator<Real>& op, int beta) {
  using std::abs;
  const auto [value, magnitude] = detail::operator_value_over_p(op, beta);
  return magnitude > 0 ? abs(value.imag()) / magnitude : Real(0);
}

/// Half-width Gamma such that max|lambda|^Gamma <= tol_tail, at least 10.
template <RealScalar Real>
int truncation_window(const DiscreteOperator<Real>& op, double tol_tail = 1e-14) {
  const double rho = to_double(op.max_root_modulus());
  if (!(rho > 0)) return 10;
  const double gamma = std::ceil(std::log(tol_tail) / std::log(rho));
  return gamma > 10 ? static_cast<int>(gamma) : 10;
}

/// Grid functions annihilated by D_m.
enum class Signal { sin, cos, t_sin, t_cos, power };

inline const char* signal_name(Signal s) {
  switch (s) {
    case Signal::sin: return "sin";
    case Signal::cos: return "cos";
    case Signal::t_sin: return "t_sin";
    case Signal::t_cos: return "t_cos";
    default: return "power";
  }
}

template <RealScalar Real>
struct ConvolutionResidual {
  Real absolute = Real(0);  // max_beta |sum_gamma D(gamma) f(beta - gamma)|
  Real relative = Real(0);  // same, divided by sum_gamma |D(gamma) f(beta - gamma)|
};

/// Truncated convolution D * f over beta in [-test_range, test_range], where
/// f is sin(h omega b), cos(h omega b), (h omega b) sin(h omega b),
/// (h omega b) cos(h omega b) or (h b)^alpha (0 <= alpha <= 2m-5).
template <RealScalar Real>
ConvolutionResidual<Real> annihilation_residual(const DiscreteOperator<Real>& op, Signal signal, int window,
                                                int alpha = 0, int test_range = 10) {
  using std::abs;
  using std::cos;
  using std::sin;
  const auto& cfg = op.config;
  if (signal == Signal::power && (alpha < 0 || alpha > 2 * cfg.m - 5))
    throw std::invalid_argument("annihilation_residual: alpha must lie in [0, 2m-5]");
  const Real h = cfg.h();
  const Real t = cfg.h_omega();
  auto f = [&](int b) -> Real {
    const Real arg = t * Real(b);
    switch (signal) {
      case Signal::sin: return sin(arg);
      case Signal::cos: return cos(arg);
      case Signal::t_sin: return arg * sin(arg);
      case Signal::t_cos: return arg * cos(arg);
      default: return ipow(h * Real(b), alpha);
    }
  };
  std::vector<Real> d(window + 1);
  for (int g = 0; g <= window; ++g) d[g] = eval_D(op, g);

  ConvolutionResidual<Real> out;
  for (int beta = -test_range; beta <= test_range; ++beta) {
    Real sum(0), scale(0);
    for (int g = -window; g <= window; ++g) {
      const Real term = d[g < 0 ? -g : g] * f(beta - g);
      sum += term;
      scale += abs(term);
    }
    out.absolute = abs(sum) > out.absolute ? abs(sum) : out.absolute;
    const Real rel = scale > 0 ? abs(sum) / scale : Real(0);
    out.relative = rel > out.relative ? rel : out.relative;
  }
  return out;
}

}  // namespace k2pm
