#include "k2pm/io.hpp"
#include "k2pm/spline_eval.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using k2pm::quad;
using test::d;

namespace {

k2pm::SplineBuild<quad> random_build(int m, double w, int n, int seed) {
  const k2pm::SplineConfig<quad> cfg{m, quad(w), n};
  return k2pm::build_spline(cfg, k2pm::preset_samples<quad>("random:" + std::to_string(seed), cfg));
}

}  // namespace

TEST_CASE("evaluation interpolates the data") {
  for (int m : {2, 3, 4, 5})
    for (double w : {0.5, 2.0}) {
      const k2pm::SplineConfig<quad> cfg{m, quad(w), 12};
      const auto s = k2pm::preset_samples<quad>("random:" + std::to_string(m), cfg);
      const auto b = k2pm::build_spline(cfg, s);
      // The error grows with the boundary condition number (about 4e9 for m = 5).
      for (int g = 0; g <= cfg.n; ++g) CHECK(d(abs(k2pm::evaluate(cfg, b.coeffs, cfg.node(g)) - s.values[g])) <= 1e-12);
    }

  const auto b = random_build(3, 1.0, 8, 1);
  CHECK_THROWS_AS(k2pm::evaluate(b.config, b.coeffs, quad(1.01)), std::domain_error);
  CHECK_THROWS_AS(k2pm::evaluate(b.config, b.coeffs, quad(-0.01)), std::domain_error);
  CHECK_NOTHROW(k2pm::evaluate(b.config, b.coeffs, quad(1.01), true));
  CHECK_NOTHROW(k2pm::evaluate(b.config, b.coeffs, quad(1)));
}

TEST_CASE("derivatives of the spline") {
  const auto b = random_build(4, 1.5, 10, 3);
  const auto& cfg = b.config;
  for (double xv : {0.03, 0.47, 0.91})
    for (int j = 1; j <= 6; ++j) {
      INFO("x=" << xv << " j=" << j);
      const quad step(1e-9), x(xv);
      const quad fd = (k2pm::evaluate_derivative(cfg, b.coeffs, j - 1, x + step) -
                       k2pm::evaluate_derivative(cfg, b.coeffs, j - 1, x - step)) /
                      (2 * step);
      CHECK(test::rel_err(fd, k2pm::evaluate_derivative(cfg, b.coeffs, j, x)) <= 1e-8);
    }
  CHECK(d(abs(k2pm::evaluate_derivative(cfg, b.coeffs, 0, quad(0.3)) - k2pm::evaluate(cfg, b.coeffs, quad(0.3)))) <= 1e-30);
}

TEST_CASE("piecewise structure between nodes") {
  for (int m : {2, 3, 4}) {
    INFO("m=" << m);
    const auto b = random_build(m, 1.2, 8, 10 + m);
    const auto& cfg = b.config;
    const quad w2 = cfg.omega * cfg.omega;
    // Homogeneous equation inside each cell.
    for (double xv : {0.06, 0.33, 0.81}) {
      const quad x(xv);
      const quad a = k2pm::evaluate_derivative(cfg, b.coeffs, 2 * m, x);
      const quad c2 = 2 * w2 * k2pm::evaluate_derivative(cfg, b.coeffs, 2 * m - 2, x);
      const quad c4 = w2 * w2 * k2pm::evaluate_derivative(cfg, b.coeffs, 2 * m - 4, x);
      CHECK(d(abs(a + c2 + c4)) <= 1e-20 * std::max({1.0, d(abs(a)), d(abs(c2))}));
    }
    // Continuous through order 2m-2 at an interior node; the jump in
    // order 2m-1 is C_b.
    const quad node = cfg.node(4), eps(1e-20);
    for (int j = 0; j <= 2 * m - 2; ++j) {
      const quad lo = k2pm::evaluate_derivative(cfg, b.coeffs, j, node - eps);
      const quad hi = k2pm::evaluate_derivative(cfg, b.coeffs, j, node + eps);
      CHECK(d(abs(hi - lo)) <= 1e-12 * std::max(1.0, d(abs(hi))));
    }
    const quad jump = k2pm::evaluate_derivative(cfg, b.coeffs, 2 * m - 1, node + eps) -
                      k2pm::evaluate_derivative(cfg, b.coeffs, 2 * m - 1, node - eps);
    CHECK(test::rel_err(jump, b.coeffs.C[4]) <= 1e-12);
  }
}

TEST_CASE("Gauss-Legendre rule") {
  for (int p : {1, 2, 5, 8, 13}) {
    const auto [x, w] = k2pm::gauss_legendre<quad>(p);
    REQUIRE(static_cast<int>(x.size()) == p);
    for (int k = 0; k <= 2 * p - 1; ++k) {
      quad s(0);
      for (int i = 0; i < p; ++i) s += w[i] * k2pm::ipow(x[i], k);
      const quad exact = k % 2 == 1 ? quad(0) : quad(2) / quad(k + 1);
      CHECK(d(abs(s - exact)) <= 1e-30);
    }
    for (int i = 1; i < p; ++i) CHECK(x[i - 1] < x[i]);
  }
  CHECK_THROWS_AS(k2pm::gauss_legendre<double>(0), std::invalid_argument);
}

TEST_CASE("semi-norm") {
  const k2pm::SplineConfig<quad> cfg{3, quad(1), 10};
  const int q = 10 * (cfg.n + 1);
  for (const char* p : {"sin", "cos", "poly:0"}) {
    const auto b = k2pm::build_spline(cfg, k2pm::preset_samples<quad>(p, cfg));
    CHECK(d(k2pm::seminorm(cfg, b.coeffs, q)) <= 1e-15);
  }
  CHECK_THROWS_AS(k2pm::seminorm(cfg, k2pm::SplineCoefficients<quad>{}, q - 1), std::invalid_argument);

  // For the interpolant, |S|^2 = (-1)^m sum_g C_g phi_g (the reproducing
  // identity of the kernel), independent of any quadrature.
  for (int m : {2, 3, 4, 5})
    for (double w : {0.5, 2.0}) {
      INFO("m=" << m << " w=" << w);
      const k2pm::SplineConfig<quad> c{m, quad(w), 10};
      const auto s = k2pm::preset_samples<quad>("random:77", c);
      const auto b = k2pm::build_spline(c, s);
      quad energy(0);
      for (int g = 0; g <= c.n; ++g) energy += b.coeffs.C[g] * s.values[g];
      if (m % 2 == 1) energy = -energy;
      const quad norm = k2pm::seminorm(c, b.coeffs, 10 * (c.n + 1));
      CHECK(test::rel_err(norm * norm, energy) <= 1e-16);
    }
}

TEST_CASE("perturbations vanishing at the nodes do not reduce the semi-norm") {
  const auto b = random_build(3, 1.0, 10, 5);
  const auto& cfg = b.config;
  const int q = 10 * (cfg.n + 1);
  const quad base = k2pm::seminorm(cfg, b.coeffs, q);
  k2pm::TrigSeries<quad> eta;
  eta.frequency = {k2pm::pi<quad>() * 9, k2pm::pi<quad>() * 11};
  eta.cos_amplitude = {quad(0.01), quad(-0.01)};
  eta.sin_amplitude = {quad(0), quad(0)};
  for (int g = 0; g <= cfg.n; ++g) CHECK(d(abs(eta.derivative(0, cfg.node(g)))) <= 1e-30);
  CHECK(k2pm::seminorm(cfg, b.coeffs, q, &eta) > base);
}
