#pragma once

// Scalar plumbing shared by every k2pm header: the extended-precision type,
// error classes and a few helpers that must work for both builtin floating
// point and boost::multiprecision numbers.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace k2pm {

/// 113-bit IEEE binary128. The representation S(x) = sum C_g G(x - x_g) + ...
/// cancels roughly N^(2m) relative digits, so double is not enough for m >= 4.
using quad = boost::multiprecision::float128;

template <class T>
concept RealScalar = std::floating_point<T> || boost::multiprecision::is_number<T>::value;

template <class Real>
using Complex = std::complex<Real>;

/// Invalid problem parameters (h*omega > 1, N+1 < m, cos(omega) ~ 0, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical step failed: root finder did not converge, singular system, ...
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <RealScalar Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

template <RealScalar Real>
inline Real machine_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

/// base^e for e >= 0 by repeated squaring. Works for real and complex T.
template <class T>
T ipow(T base, int e) {
  T result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

inline double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <RealScalar Real>
Real factorial(int n) {
  Real f(1);
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <RealScalar Real>
Real binomial(int n, int k) {
  if (k < 0 || k > n) return Real(0);
  Real b(1);
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

template <RealScalar Real>
int sign_of(const Real& x) {
  return (x > 0) - (x < 0);
}

template <RealScalar Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

/// Shortest round-trippable decimal for Real (17 digits for double, 36 for quad).
template <RealScalar Real>
std::string to_decimal(const Real& x) {
  constexpr int digits = std::numeric_limits<Real>::max_digits10;
  if constexpr (std::floating_point<Real>) {
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << x;
    return os.str();
  } else {
    return x.str(digits, std::ios_base::scientific);
  }
}

template <RealScalar Real>
Real from_decimal(const std::string& s) {
  if constexpr (std::floating_point<Real>) {
    std::size_t pos = 0;
    const long double v = std::stold(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("from_decimal: trailing characters in '" + s + "'");
    return static_cast<Real>(v);
  } else {
    return Real(s);
  }
}

/// Real part after checking that the imaginary residue really cancelled.
/// Conjugate root pairs make every observable quantity real; a residue above
/// `rel_tol * max(|z|, scale)` means the pairing broke.
template <RealScalar Real>
Real checked_real(const Complex<Real>& z, const Real& scale, const Real& rel_tol, const char* what) {
  using std::abs;
  Real bound = rel_tol * (abs(z.real()) > scale ? abs(z.real()) : scale);
  if (abs(z.imag()) > bound) {
    throw NumericError(std::string(what) + ": imaginary residue does not cancel");
  }
  return z.real();
}

}  // namespace k2pm
