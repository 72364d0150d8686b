#pragma once

// Invariant checks for one configuration. Shared by the command-line
// `verify` subcommand and the acceptance runner.

#include "k2pm/fundamental_solution.hpp"
#include "k2pm/io.hpp"
#include "k2pm/oracle.hpp"
#include "k2pm/spline_builder.hpp"
#include "k2pm/spline_eval.hpp"

#include <random>
#include <string>
#include <vector>

namespace k2pm {

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
};

inline Check make_check(std::string name, double value, double tolerance) {
  return Check{std::move(name), value, tolerance, value <= tolerance};
}

/// Null-space functions of the semi-norm for order m: 1, x, .., x^(m-3),
/// sin(w x), cos(w x). Names match the CLI presets.
inline std::vector<std::string> null_space_presets(int m) {
  std::vector<std::string> out;
  for (int a = 0; a <= m - 3; ++a) out.push_back("poly:" + std::to_string(a));
  out.push_back("sin");
  out.push_back("cos");
  return out;
}

template <RealScalar Real>
Real preset_value(const std::string& name, const SplineConfig<Real>& cfg, const Real& x) {
  using std::cos;
  using std::sin;
  if (name == "sin") return sin(cfg.omega * x);
  if (name == "cos") return cos(cfg.omega * x);
  if (name.rfind("poly:", 0) == 0) return ipow(x, std::stoi(name.substr(5)));
  throw std::invalid_argument("preset_value: no closed form for '" + name + "'");
}

/// max over `points` equispaced x in [0, 1] of |S(x) - phi(x)| / max(1, |phi|_inf).
template <RealScalar Real>
Real exactness_error(const SplineConfig<Real>& cfg, const std::string& preset, int points = 1000) {
  using std::abs;
  const auto samples = preset_samples(preset, cfg);
  const auto build = build_spline(cfg, samples);
  Real worst(0), scale(1);
  for (int i = 0; i < points; ++i) {
    const Real x = Real(i) / Real(points - 1);
    const Real f = preset_value(preset, cfg, x);
    scale = abs(f) > scale ? abs(f) : scale;
    const Real e = abs(evaluate(cfg, build.coeffs, x) - f);
    worst = e > worst ? e : worst;
  }
  return worst / scale;
}

/// max_b |S(x_b) - phi_b| / max(1, |phi|_inf).
template <RealScalar Real>
Real interpolation_error(const SplineConfig<Real>& cfg, const SplineCoefficients<Real>& coeffs,
                         const SampleSet<Real>& samples) {
  using std::abs;
  Real worst(0), scale(1);
  for (int b = 0; b <= cfg.n; ++b) {
    scale = abs(samples.values[b]) > scale ? abs(samples.values[b]) : scale;
    const Real e = abs(evaluate(cfg, coeffs, cfg.node(b)) - samples.values[b]);
    worst = e > worst ? e : worst;
  }
  return worst / scale;
}

/// eta(x) = amplitude sum_k a_k sin(pi N x) sin(pi k x), which vanishes at
/// every node, written as a cosine series.
template <RealScalar Real>
TrigSeries<Real> node_vanishing_perturbation(const SplineConfig<Real>& cfg, std::mt19937_64& rng, int modes = 4) {
  TrigSeries<Real> eta;
  const double amplitude = std::ldexp(1.0, -static_cast<int>(rng() % 20));
  for (int k = 1; k <= modes; ++k) {
    const Real a = Real(amplitude * detail::unit_interval_symmetric(rng));
    eta.frequency.push_back(pi<Real>() * Real(cfg.n - k));
    eta.cos_amplitude.push_back(a / 2);
    eta.sin_amplitude.push_back(Real(0));
    eta.frequency.push_back(pi<Real>() * Real(cfg.n + k));
    eta.cos_amplitude.push_back(-a / 2);
    eta.sin_amplitude.push_back(Real(0));
  }
  return eta;
}

/// min over trials of seminorm(S + eta) - seminorm(S); never below -1e-9
/// for the minimizing spline.
template <RealScalar Real>
Real minimality_margin(const SplineConfig<Real>& cfg, const SplineCoefficients<Real>& coeffs, int trials,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int q = 10 * (cfg.n + 1);
  const Real base = seminorm(cfg, coeffs, q);
  Real worst(0);
  bool first = true;
  for (int i = 0; i < trials; ++i) {
    const auto eta = node_vanishing_perturbation(cfg, rng);
    const Real margin = seminorm(cfg, coeffs, q, &eta) - base;
    if (first || margin < worst) worst = margin;
    first = false;
  }
  return worst;
}

/// The per-configuration invariant suite.
template <RealScalar Real>
std::vector<Check> verify_config(const SplineConfig<Real>& cfg, std::uint64_t seed, int random_sets = 5) {
  using std::abs;
  std::vector<Check> checks;
  validate_builder_config(cfg);

  const auto op = build_operator(cfg);
  Real lead_dev = abs(leading_coeff(cfg) - op.char_poly[2 * cfg.m - 2]) / abs(leading_coeff(cfg));
  checks.push_back(make_check("leading_coeff_consistency", to_double(lead_dev), 1e-12));

  Real pairing(0);
  for (const auto& l : op.lambda) {
    const Complex<Real> inv = Complex<Real>(1) / l;
    const Real r = abs(op.char_poly(inv)) / op.char_poly.magnitude_at(inv);
    pairing = r > pairing ? r : pairing;
  }
  checks.push_back(make_check("reciprocal_root_residual", to_double(pairing), 1e-9));

  const int window = truncation_window(op);
  Real annihilation(0);
  for (Signal s : {Signal::sin, Signal::cos, Signal::t_sin, Signal::t_cos}) {
    const Real r = annihilation_residual(op, s, window).relative;
    annihilation = r > annihilation ? r : annihilation;
  }
  for (int a = 0; a <= 2 * cfg.m - 5; ++a) {
    const Real r = annihilation_residual(op, Signal::power, window, a).relative;
    annihilation = r > annihilation ? r : annihilation;
  }
  checks.push_back(make_check("annihilation_residual", to_double(annihilation), 1e-8));

  const int deep = truncation_window(op, 1e-30);
  Real delta(0);
  for (int b = -20; b <= 20; ++b) {
    const Real r = delta_residual(op, b, deep);
    delta = r > delta ? r : delta;
  }
  checks.push_back(make_check("delta_residual", to_double(delta), 1e-8));

  Real exact(0);
  for (const auto& p : null_space_presets(cfg.m)) {
    const Real e = exactness_error(cfg, p);
    exact = e > exact ? e : exact;
  }
  checks.push_back(make_check("exactness", to_double(exact), 1e-7));

  std::mt19937_64 rng(seed);
  Real side(0), interp(0), extension(0), reconstruction(0), minimality(0);
  double oracle = 0;
  for (int i = 0; i < random_sets; ++i) {
    const auto samples = preset_samples<Real>("random:" + std::to_string(rng() >> 1), cfg);
    const auto b = build_spline(cfg, samples);
    side = b.side.max_scaled() > side ? b.side.max_scaled() : side;
    const Real ie = interpolation_error(cfg, b.coeffs, samples);
    interp = ie > interp ? ie : interp;
    for (int k = 1; k <= cfg.m + 3; ++k) {
      for (long long beta : {static_cast<long long>(-k), static_cast<long long>(cfg.n) + k}) {
        const Real r = extension_residual(cfg, b.op, b.boundary, samples, beta, deep).relative;
        extension = r > extension ? r : extension;
      }
    }
    const Real rr = reconstruction_residual(cfg, b.op, b.boundary, samples, b.coeffs, deep);
    reconstruction = rr > reconstruction ? rr : reconstruction;
    const auto dense = dense_solve(cfg, samples);
    oracle = std::max(oracle, compare(b.coeffs, dense.coeffs, 1e-6).worst_scaled());
    const Real mm = minimality_margin(cfg, b.coeffs, 4, rng());
    minimality = mm < minimality ? mm : minimality;
  }
  checks.push_back(make_check("side_conditions", to_double(side), 1e-8));
  checks.push_back(make_check("interpolation", to_double(interp), 1e-8));
  checks.push_back(make_check("extension_consistency", to_double(extension), 1e-8));
  checks.push_back(make_check("reconstruction", to_double(reconstruction), 1e-8));
  checks.push_back(make_check("oracle_equivalence", oracle, 1e-6));
  // Reported as the size of the largest decrease (0 when none).
  checks.push_back(make_check("minimality_decrease", to_double(minimality < 0 ? Real(-minimality) : Real(0)), 1e-9));

  Real null_norm(0);
  for (const auto& p : null_space_presets(cfg.m)) {
    const auto b = build_spline(cfg, preset_samples(p, cfg));
    const Real s = seminorm(cfg, b.coeffs, 10 * (cfg.n + 1));
    null_norm = s > null_norm ? s : null_norm;
  }
  checks.push_back(make_check("null_space_seminorm", to_double(null_norm), 1e-7));
  return checks;
}

}  // namespace k2pm
