#include "k2pm/discrete_operator.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using k2pm::quad;
using test::d;
using test::with_h_omega;

namespace {

std::vector<quad> poly_mul(const std::vector<quad>& a, const std::vector<quad>& b) {
  std::vector<quad> c(a.size() + b.size() - 1, quad(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<quad> poly_pow(const std::vector<quad>& a, int e) {
  std::vector<quad> r{quad(1)};
  for (int i = 0; i < e; ++i) r = poly_mul(r, a);
  return r;
}

// Characteristic polynomial straight from its defining formula, evaluated
// term by term (no series rearrangement).
std::vector<quad> direct_characteristic(int m, quad t) {
  const quad a = (2 * m - 3) * sin(t) - t * cos(t);
  const quad b = 2 * t - (2 * m - 3) * sin(2 * t);
  std::vector<quad> total = poly_mul(poly_pow({quad(1), quad(-1)}, 2 * m - 4), {a, b, a});
  const auto q = poly_pow({quad(1), -2 * cos(t), quad(1)}, 2);
  for (int k = 1; k <= m - 2; ++k) {
    const quad c = quad((k % 2 == 0 ? 2 : -2) * (m - k - 1)) * pow(t, 2 * k - 1) / k2pm::factorial<quad>(2 * k - 1);
    const auto ef = k2pm::euler_frobenius<quad>(2 * k - 2).coeffs();
    const auto term = poly_mul(q, poly_mul(poly_pow({quad(1), quad(-1)}, 2 * m - 2 * k - 4), ef));
    if (total.size() < term.size()) total.resize(term.size(), quad(0));
    for (std::size_t s = 0; s < term.size(); ++s) total[s] += c * term[s];
  }
  return total;
}

}  // namespace

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(k2pm::SplineConfig<double>{2, 1.0, 1}.validate());
  CHECK_THROWS_AS((k2pm::SplineConfig<double>{1, 1.0, 5}.validate()), k2pm::ConfigError);
  CHECK_THROWS_AS((k2pm::SplineConfig<double>{5, 1.0, 3}.validate()), k2pm::ConfigError);
  CHECK_THROWS_AS((k2pm::SplineConfig<double>{3, 0.0, 5}.validate()), k2pm::ConfigError);
  CHECK_THROWS_AS((k2pm::SplineConfig<double>{3, 6.0, 5}.validate()), k2pm::ConfigError);
  CHECK_NOTHROW(k2pm::SplineConfig<double>{3, 5.0, 5}.validate());
  const k2pm::SplineConfig<double> c{3, 2.0, 8};
  CHECK(c.h() == 0.125);
  CHECK(c.h_omega() == 0.25);
  CHECK(c.node(8) == 1.0);
}

TEST_CASE("characteristic polynomial") {
  SECTION("m = 2 closed form") {
    for (double t : {0.1, 0.5, 1.0}) {
      const auto P = k2pm::characteristic_poly(with_h_omega(2, t, 4));
      const quad tq = quad(t);
      const quad a = sin(tq) - tq * cos(tq);
      const quad b = 2 * tq - sin(2 * tq);
      REQUIRE(P.degree() == 2);
      CHECK(test::rel_err(P[0], a) < 1e-28);
      CHECK(test::rel_err(P[1], b) < 1e-28);
      CHECK(test::rel_err(P[2], a) < 1e-28);
    }
    const auto P1 = k2pm::characteristic_poly(with_h_omega<double>(2, 1.0, 4));
    CHECK(P1[0] == Catch::Approx(0.3011686789).epsilon(1e-9));
    CHECK(P1[1] == Catch::Approx(1.0907025732).epsilon(1e-9));
  }

  SECTION("agrees with term-by-term evaluation and is palindromic") {
    for (int m = 2; m <= 6; ++m)
      for (double t : {0.1, 0.5, 1.0}) {
        INFO("m=" << m << " t=" << t);
        const auto P = k2pm::characteristic_poly(with_h_omega(m, t, 10));
        const auto ref = direct_characteristic(m, quad(t));
        REQUIRE(P.degree() == 2 * m - 2);
        quad scale(0);
        for (const auto& v : ref) scale = abs(v) > scale ? quad(abs(v)) : scale;
        // The direct form cancels about (2m-2) log10(1/t) digits.
        const double tol = 1e-32 * std::pow(1.0 / t, 2 * m - 2) * 100;
        for (int s = 0; s <= 2 * m - 2; ++s) {
          CHECK(d(abs(P[s] - ref[s]) / scale) < tol);
          CHECK(d(abs(P[s] - P[2 * m - 2 - s]) / scale) < 1e-30);
        }
      }
  }
}

TEST_CASE("leading coefficient") {
  CHECK(k2pm::leading_coeff(with_h_omega<double>(2, 1.0, 3)) == Catch::Approx(std::sin(1.0) - std::cos(1.0)).epsilon(1e-14));
  CHECK(k2pm::leading_coeff(with_h_omega<double>(2, 1.0, 3)) == Catch::Approx(0.3011686789).epsilon(1e-9));
  // 3 sin(1/2) - cos(1/2)/2 - 1
  const double expected = 3 * std::sin(0.5) - 0.5 * std::cos(0.5) - 1.0;
  CHECK(k2pm::leading_coeff(with_h_omega<double>(3, 0.5, 4)) == Catch::Approx(expected).epsilon(1e-9));
  CHECK(k2pm::leading_coeff(with_h_omega<double>(3, 0.5, 4)) == Catch::Approx(-0.000514666).epsilon(1e-5));

  for (int m = 2; m <= 6; ++m)
    for (double t : {0.05, 0.5, 1.0}) {
      const auto cfg = with_h_omega(m, t, 20);
      const quad lead = k2pm::leading_coeff(cfg);
      CHECK(test::rel_err(lead, k2pm::characteristic_poly(cfg)[2 * m - 2]) < 1e-12);
    }
}

TEST_CASE("stable roots") {
  const auto P = k2pm::characteristic_poly(with_h_omega(2, 1.0, 4));
  const auto roots = k2pm::stable_roots(P);
  REQUIRE(roots.size() == 1);
  CHECK(test::rel_err(roots[0].real(), cos(quad(1)) - sin(quad(1))) < 1e-30);
  CHECK(d(roots[0].real()) == Catch::Approx(-0.3011686789).epsilon(1e-9));

  for (int m = 2; m <= 5; ++m)
    for (double t : {0.1, 0.5, 1.0}) {
      INFO("m=" << m << " t=" << t);
      const auto Pm = k2pm::characteristic_poly(with_h_omega(m, t, 10));
      const auto inside = k2pm::stable_roots(Pm);
      CHECK(static_cast<int>(inside.size()) == m - 1);
      for (const auto& l : inside) {
        CHECK(d(abs(l)) < 1.0);
        const auto inv = std::complex<quad>(1) / l;
        CHECK(d(abs(Pm(inv)) / Pm.magnitude_at(inv)) < 1e-9);
      }
    }

  CHECK_THROWS_AS(k2pm::stable_roots(k2pm::RealPolynomial<double>({1.0, 0.0, 1.0})), k2pm::NumericError);
  CHECK_THROWS_AS(k2pm::stable_roots(k2pm::RealPolynomial<double>({0.125, -0.75, 1.0})), k2pm::NumericError);
  CHECK_THROWS_AS(k2pm::stable_roots(k2pm::RealPolynomial<double>({1.0, 2.0, 3.0, 4.0})), std::invalid_argument);
}

TEST_CASE("operator construction") {
  SECTION("m = 2, h omega = 1") {
    const auto cfg = with_h_omega(2, 1.0, 4);
    const auto op = k2pm::build_operator(cfg);
    const quad a = sin(quad(1)) - cos(quad(1));
    const quad b = 2 - sin(quad(2));
    const quad w = cfg.omega;
    CHECK(test::rel_err(op.p, 2 * w * w * w / a) < 1e-30);
    CHECK(test::rel_err(op.C, 4 - 4 * cos(quad(1)) - 4 - b / a) < 1e-30);
  }

  for (int m = 2; m <= 5; ++m)
    for (double t : {0.1, 0.5, 1.0}) {
      INFO("m=" << m << " t=" << t);
      const auto op = k2pm::build_operator(with_h_omega(m, t, 10));
      REQUIRE(op.terms() == m - 1);
      CHECK(k2pm::eval_D(op, 5) == k2pm::eval_D(op, -5));
      CHECK(k2pm::eval_D(op, 1) == k2pm::eval_D(op, -1));

      std::complex<quad> centre(op.C);
      for (int k = 0; k < op.terms(); ++k) centre += op.A[k] / op.lambda[k];
      CHECK(test::rel_err(k2pm::eval_D(op, 0), op.p * centre.real()) < 1e-26);

      for (int b = 0; b <= 30; ++b) CHECK(d(k2pm::eval_D_imaginary_residue(op, b)) <= 1e-10);

      // Geometric decay at the rate of the largest root.
      const quad rho = op.max_root_modulus();
      const quad ratio = abs(k2pm::eval_D(op, 41) / k2pm::eval_D(op, 40));
      CHECK(d(abs(ratio - rho)) < 1e-3);

      if (m >= 3) {
        const int window = k2pm::truncation_window(op);
        quad sum(0), mag(0);
        for (int b = -window; b <= window; ++b) {
          sum += k2pm::eval_D(op, b);
          mag += abs(k2pm::eval_D(op, b));
        }
        CHECK(d(abs(sum) / mag) < 1e-12);
      }
    }
}

TEST_CASE("truncation window") {
  const auto op = k2pm::build_operator(with_h_omega(3, 0.5, 10));
  const int window = k2pm::truncation_window(op);
  CHECK(window >= 10);
  CHECK(std::pow(d(op.max_root_modulus()), window) <= 1e-14 * 1.0000001);
  CHECK(std::pow(d(op.max_root_modulus()), window - 1) > 1e-14);
  CHECK(k2pm::truncation_window(op, 1e-30) > window);
}

TEST_CASE("annihilation of the null space") {
  using k2pm::Signal;
  for (int m = 2; m <= 5; ++m)
    for (double t : {0.1, 0.5, 1.0}) {
      INFO("m=" << m << " t=" << t);
      const auto op = k2pm::build_operator(with_h_omega(m, t, 10));
      const int window = k2pm::truncation_window(op);
      for (Signal s : {Signal::sin, Signal::cos, Signal::t_sin, Signal::t_cos})
        CHECK(d(k2pm::annihilation_residual(op, s, window).relative) <= 1e-8);
      for (int a = 0; a <= 2 * m - 5; ++a)
        CHECK(d(k2pm::annihilation_residual(op, Signal::power, window, a).relative) <= 1e-8);
      CHECK_THROWS_AS(k2pm::annihilation_residual(op, Signal::power, window, 2 * m - 4), std::invalid_argument);
    }

  // A signal outside the null space is not annihilated.
  const auto op = k2pm::build_operator(with_h_omega(3, 0.5, 10));
  CHECK(d(k2pm::annihilation_residual(op, Signal::power, 40, 1).relative) <= 1e-8);
  quad sum(0), mag(0);
  for (int g = -40; g <= 40; ++g) {
    const quad term = k2pm::eval_D(op, g) * quad(g * g);
    sum += term;
    mag += abs(term);
  }
  CHECK(d(abs(sum) / mag) > 1e-6);
}
