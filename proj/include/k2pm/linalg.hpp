#pragma once

// Small dense LU with partial pivoting. Used for the (2m-2) boundary system
// and for the (N+m+1) reference system; both are solved in the working
// precision, which rules out LAPACK.

#include "k2pm/numeric.hpp"

#include <numeric>
#include <vector>

namespace k2pm {

/// Row-major square matrix.
template <RealScalar Real>
struct DenseMatrix {
  int n = 0;
  std::vector<Real> a;

  DenseMatrix() = default;
  explicit DenseMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, Real(0)) {}

  Real& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Real& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  Real norm1() const {
    using std::abs;
    Real best(0);
    for (int j = 0; j < n; ++j) {
      Real col(0);
      for (int i = 0; i < n; ++i) col += abs((*this)(i, j));
      if (col > best) best = col;
    }
    return best;
  }

  std::vector<Real> multiply(const std::vector<Real>& x) const {
    std::vector<Real> y(n, Real(0));
    for (int i = 0; i < n; ++i) {
      Real acc(0);
      for (int j = 0; j < n; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }
};

template <RealScalar Real>
class DenseLU {
 public:
  /// Factorizes PA = LU. Throws NumericError on an exactly zero pivot or a
  /// pivot below n*eps*max|a_ij| (numerically singular).
  explicit DenseLU(const DenseMatrix<Real>& m) : lu_(m), perm_(m.n), norm1_(m.norm1()) {
    using std::abs;
    const int n = lu_.n;
    std::iota(perm_.begin(), perm_.end(), 0);
    Real max_entry(0);
    for (const auto& v : lu_.a) max_entry = abs(v) > max_entry ? abs(v) : max_entry;
    const Real tiny = Real(n) * machine_epsilon<Real>() * max_entry;

    for (int k = 0; k < n; ++k) {
      int piv = k;
      Real best = abs(lu_(k, k));
      for (int i = k + 1; i < n; ++i) {
        if (abs(lu_(i, k)) > best) {
          best = abs(lu_(i, k));
          piv = i;
        }
      }
      if (!(best > tiny)) throw NumericError("DenseLU: matrix is numerically singular");
      if (piv != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
      }
      const Real inv = Real(1) / lu_(k, k);
      for (int i = k + 1; i < n; ++i) {
        Real& lik = lu_(i, k);
        if (lik == Real(0)) continue;
        lik *= inv;
        const Real f = lik;
        Real* row_i = &lu_(i, 0);
        const Real* row_k = &lu_(k, 0);
        for (int j = k + 1; j < n; ++j) row_i[j] -= f * row_k[j];
      }
    }
  }

  int size() const { return lu_.n; }

  std::vector<Real> solve(const std::vector<Real>& b) const {
    const int n = lu_.n;
    std::vector<Real> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  /// Solves A^T x = b.
  std::vector<Real> solve_transposed(const std::vector<Real>& b) const {
    const int n = lu_.n;
    std::vector<Real> y(b);
    // U^T z = b
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) y[i] -= lu_(j, i) * y[j];
      y[i] /= lu_(i, i);
    }
    // L^T w = z
    for (int i = n - 1; i >= 0; --i)
      for (int j = i + 1; j < n; ++j) y[i] -= lu_(j, i) * y[j];
    std::vector<Real> x(n);
    for (int i = 0; i < n; ++i) x[perm_[i]] = y[i];
    return x;
  }

  /// 1-norm condition number estimate ||A||_1 * est(||A^-1||_1), Hager's method.
  Real condition_estimate() const {
    using std::abs;
    const int n = lu_.n;
    std::vector<Real> x(n, Real(1) / Real(n));
    Real estimate(0);
    for (int iter = 0; iter < 5; ++iter) {
      std::vector<Real> y = solve(x);
      Real ynorm(0);
      for (const auto& v : y) ynorm += abs(v);
      std::vector<Real> xi(n);
      for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0 ? Real(1) : Real(-1);
      std::vector<Real> z = solve_transposed(xi);
      int jmax = 0;
      for (int j = 1; j < n; ++j)
        if (abs(z[j]) > abs(z[jmax])) jmax = j;
      Real ztx(0);
      for (int i = 0; i < n; ++i) ztx += z[i] * x[i];
      if (ynorm <= estimate || abs(z[jmax]) <= ztx) {
        estimate = ynorm > estimate ? ynorm : estimate;
        break;
      }
      estimate = ynorm;
      std::fill(x.begin(), x.end(), Real(0));
      x[jmax] = Real(1);
    }
    return norm1_ * estimate;
  }

 private:
  DenseMatrix<Real> lu_;
  std::vector<int> perm_;
  Real norm1_;
};

}  // namespace k2pm
