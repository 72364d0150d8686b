#pragma once

// Dense real polynomials, Euler-Frobenius polynomials, finite differences of
// powers at zero, closed-form geometric tail sums and a simultaneous
// (Aberth-Ehrlich) complex root finder.

#include "k2pm/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace k2pm {

/// Polynomial with real coefficients stored in ascending degree order:
/// coeffs()[s] multiplies x^s. The zero polynomial is a single zero coefficient.
template <RealScalar Real>
class RealPolynomial {
 public:
  RealPolynomial() : coeffs_{Real(0)} {}

  explicit RealPolynomial(std::vector<Real> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  RealPolynomial(std::initializer_list<Real> coeffs) : coeffs_(coeffs) { normalize(); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Real>& coeffs() const { return coeffs_; }
  const Real& operator[](std::size_t s) const { return coeffs_[s]; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Real(0); }

  /// Horner evaluation; T may be Real or Complex<Real>.
  template <class T>
  T operator()(const T& x) const {
    T acc(coeffs_.back());
    for (int s = degree() - 1; s >= 0; --s) acc = acc * x + T(coeffs_[s]);
    return acc;
  }

  /// Sum_s |p_s| |x|^s, the natural scale for judging |p(x)|.
  template <class T>
  Real magnitude_at(const T& x) const {
    using std::abs;
    Real r = abs(x);
    Real acc = abs(coeffs_.back());
    for (int s = degree() - 1; s >= 0; --s) acc = acc * r + abs(coeffs_[s]);
    return acc;
  }

  RealPolynomial derivative() const {
    if (degree() == 0) return RealPolynomial();
    std::vector<Real> d(coeffs_.size() - 1);
    for (std::size_t s = 1; s < coeffs_.size(); ++s) d[s - 1] = coeffs_[s] * Real(static_cast<int>(s));
    return RealPolynomial(std::move(d));
  }

  friend RealPolynomial operator+(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<Real> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Real(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return RealPolynomial(std::move(c));
  }

  friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<Real> c(a.coeffs_.size() + b.coeffs_.size() - 1, Real(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return RealPolynomial(std::move(c));
  }

  friend RealPolynomial operator*(const Real& k, const RealPolynomial& a) {
    std::vector<Real> c = a.coeffs_;
    for (auto& v : c) v *= k;
    return RealPolynomial(std::move(c));
  }

 private:
  void normalize() {
    if (coeffs_.empty()) coeffs_.push_back(Real(0));
    while (coeffs_.size() > 1 && coeffs_.back() == Real(0)) coeffs_.pop_back();
  }

  std::vector<Real> coeffs_;
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("finite_diff_zero: int64 overflow");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("finite_diff_zero: int64 overflow");
  return r;
}

}  // namespace detail

/// Delta^i 0^k = sum_{l=1}^{i} (-1)^(i-l) C(i,l) l^k, with Delta^0 0^0 = 1.
inline std::int64_t finite_diff_zero(int i, int k) {
  if (i < 0 || k < 0) throw std::invalid_argument("finite_diff_zero: negative order");
  if (i == 0) return k == 0 ? 1 : 0;
  std::int64_t total = 0;
  std::int64_t binom = 1;  // C(i, l), updated incrementally
  for (int l = 1; l <= i; ++l) {
    binom = binom * (i - l + 1) / l;
    std::int64_t power = 1;
    for (int e = 0; e < k; ++e) power = detail::checked_mul(power, l);
    std::int64_t term = detail::checked_mul(binom, power);
    total = detail::checked_add(total, ((i - l) % 2 == 0) ? term : -term);
  }
  return total;
}

/// Integer coefficients (ascending) of the Euler-Frobenius polynomial E_k,
/// expanded from Q_k(x) = sum_{i=0}^{k+1} Delta^i 0^(k+1) (x-1)^(k+1-i).
inline std::vector<std::int64_t> euler_frobenius_coeffs(int k) {
  if (k < 0) throw std::invalid_argument("euler_frobenius: negative degree");
  std::vector<std::int64_t> out(static_cast<std::size_t>(k) + 2, 0);
  for (int i = 0; i <= k + 1; ++i) {
    const std::int64_t w = finite_diff_zero(i, k + 1);
    if (w == 0) continue;
    const int n = k + 1 - i;
    // (x-1)^n = sum_s C(n,s) x^s (-1)^(n-s)
    std::int64_t binom = 1;
    for (int s = 0; s <= n; ++s) {
      if (s > 0) binom = binom * (n - s + 1) / s;
      const std::int64_t term = detail::checked_mul(w, binom);
      out[s] = detail::checked_add(out[s], ((n - s) % 2 == 0) ? term : -term);
    }
  }
  // The (x-1)^(k+1) term has weight Delta^0 0^(k+1) = 0, so degree is exactly k.
  out.pop_back();
  return out;
}

template <RealScalar Real = double>
RealPolynomial<Real> euler_frobenius(int k) {
  std::vector<Real> c;
  for (std::int64_t v : euler_frobenius_coeffs(k)) c.emplace_back(static_cast<long long>(v));
  return RealPolynomial<Real>(std::move(c));
}

template <class T>
auto modulus(const T& q) {
  using std::abs;
  return abs(q);
}

/// sum_{g>=0} q^g g^k = 1/(1-q) sum_{i=0}^{k} (q/(1-q))^i Delta^i 0^k, |q| < 1.
/// T is a real scalar or a complex number.
template <class T>
T geom_power_tail(const T& q, int k) {
  if (!(modulus(q) < 1)) throw std::domain_error("geom_power_tail: |q| must be < 1");
  const T one(1);
  const T ratio = q / (one - q);
  T sum(0);
  T ratio_pow(1);
  for (int i = 0; i <= k; ++i) {
    const std::int64_t w = finite_diff_zero(i, k);
    if (w != 0) sum += ratio_pow * T(static_cast<long long>(w));
    ratio_pow *= ratio;
  }
  return sum / (one - q);
}

/// Trigonometric tails s = sum_{g>=1} lambda^g sin(theta g + phase) and
/// c = sum_{g>=1} lambda^g cos(theta g + phase), |lambda| < 1.
///
/// With z = lambda e^{i theta} and w = lambda e^{-i theta} the two geometric
/// series are e^{i phase} z/(1-z) and e^{-i phase} w/(1-w); their half sum
/// and half difference give c and s. (1-z)(1-w) = lambda^2 - 2 lambda cos theta + 1.
/// Holds verbatim for complex lambda, which the operator roots can be.
template <class T, RealScalar Real>
std::pair<T, T> geom_trig_tail(const T& lambda, const Real& theta, const Real& phase) {
  using std::cos;
  using std::sin;
  if (!(modulus(lambda) < 1)) throw std::domain_error("geom_trig_tail: |lambda| must be < 1");
  using C = Complex<Real>;
  const C lam(lambda);
  const C e_theta(cos(theta), sin(theta));
  const C e_phase(cos(phase), sin(phase));
  const C z = lam * e_theta;
  const C w = lam * std::conj(e_theta);
  const C one(1);
  const C forward = e_phase * z / (one - z);
  const C backward = std::conj(e_phase) * w / (one - w);
  const C c = (forward + backward) / Real(2);
  const C s = (forward - backward) / C(0, 2);
  if constexpr (std::is_same_v<T, C>) {
    return {s, c};
  } else {
    return {s.real(), c.real()};
  }
}

/// All complex roots of p (with multiplicity) by Aberth-Ehrlich iteration,
/// followed by one Newton polish per root. Throws NumericError if the
/// iteration budget runs out or a root fails the residual check
/// |p(z)| <= tol * sum_s |p_s||z|^s.
template <RealScalar Real>
std::vector<Complex<Real>> poly_roots(const RealPolynomial<Real>& p, Real tol = Real(1e-12),
                                      int max_iterations = 500) {
  using std::abs;
  using std::cos;
  using std::pow;
  using std::sin;
  using C = Complex<Real>;
  const int n = p.degree();
  if (n < 1) throw std::invalid_argument("poly_roots: degree must be >= 1");

  const RealPolynomial<Real> dp = p.derivative();
  const auto& a = p.coeffs();

  // Initial guesses on a circle whose radius is the geometric mean of the
  // root moduli (|a_0/a_n|^(1/n)), rotated off the real axis.
  Real radius = abs(a[0] / a[n]);
  radius = radius > 0 ? Real(pow(radius, Real(1) / n)) : Real(1);
  std::vector<C> z(n);
  for (int k = 0; k < n; ++k) {
    const Real angle = Real(2) * pi<Real>() * k / n + Real(0.4);
    z[k] = C(radius * cos(angle), radius * sin(angle));
  }

  const Real step_tol = Real(16) * machine_epsilon<Real>();
  bool converged = false;
  for (int iter = 0; iter < max_iterations && !converged; ++iter) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      const C pz = p(z[i]);
      if (abs(pz) <= Real(4) * machine_epsilon<Real>() * p.magnitude_at(z[i])) continue;
      const C ratio = pz / dp(z[i]);
      C repulsion(0);
      for (int j = 0; j < n; ++j)
        if (j != i) repulsion += C(1) / (z[i] - z[j]);
      const C step = ratio / (C(1) - ratio * repulsion);
      z[i] -= step;
      if (abs(step) > step_tol * (abs(z[i]) + Real(1))) converged = false;
    }
  }
  if (!converged) throw NumericError("poly_roots: Aberth iteration did not converge");

  for (auto& root : z) {
    const C d = dp(root);
    if (d != C(0)) {
      const C polished = root - p(root) / d;
      if (abs(p(polished)) <= abs(p(root))) root = polished;
    }
    if (abs(p(root)) > tol * p.magnitude_at(root))
      throw NumericError("poly_roots: residual check failed");
  }
  return z;
}

}  // namespace k2pm
