// k2pm: build, evaluate, verify and benchmark K2(P_m) interpolation splines.
//
// Exit codes: 0 success, 1 a verification or comparison failed,
// 2 invalid configuration or input, 3 numerical failure.

#include "k2pm/io.hpp"
#include "k2pm/oracle.hpp"
#include "k2pm/spline_builder.hpp"
#include "k2pm/spline_eval.hpp"
#include "k2pm/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using k2pm::quad;
using nlohmann::json;

struct Options {
  int m = 0;
  std::string omega;
  int n = 0;
  std::string input;
  std::string preset;
  std::string output;
  int points = 1000;
  std::string format = "json";
  double tolerance = 1e-6;
  bool allow_extrapolation = false;
  std::uint64_t seed = 1;
  double x_min = 0;
  double x_max = 1;
  std::vector<int> sizes{1000, 10000, 100000};
  int dense_max = 1000;
  int repeats = 3;
};

void init_logging() {
  auto logger = spdlog::stderr_logger_st("k2pm");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("K2PM_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

k2pm::SplineConfig<quad> config_from(const Options& o) {
  k2pm::SplineConfig<quad> cfg;
  cfg.m = o.m;
  cfg.n = o.n;
  try {
    cfg.omega = k2pm::from_decimal<quad>(o.omega);
  } catch (const std::exception&) {
    throw k2pm::ConfigError("omega: not a number '" + o.omega + "'");
  }
  k2pm::validate_builder_config(cfg);
  return cfg;
}

k2pm::SampleSet<quad> samples_from(const Options& o, const k2pm::SplineConfig<quad>& cfg) {
  if (o.input.empty() == o.preset.empty()) throw k2pm::ConfigError("exactly one of --input and --preset is required");
  if (!o.preset.empty()) return k2pm::preset_samples(o.preset, cfg);
  std::ifstream in(o.input);
  if (!in) throw k2pm::ConfigError("cannot open " + o.input);
  return k2pm::read_samples_csv(in, cfg);
}

void write_output(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw k2pm::ConfigError("cannot write " + o.output);
  out << text;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json config_json(const k2pm::SplineConfig<quad>& cfg) {
  return {{"m", cfg.m}, {"omega", k2pm::to_double(cfg.omega)}, {"n", cfg.n}};
}

int cmd_build(const Options& o) {
  const auto cfg = config_from(o);
  const auto samples = samples_from(o, cfg);
  const auto build = k2pm::build_spline(cfg, samples);
  if (build.ill_conditioned)
    spdlog::warn("boundary system condition estimate {:.3e} exceeds {:.0e}", k2pm::to_double(build.boundary.condition),
                 k2pm::kBoundaryConditionWarning);
  spdlog::info("built m={} n={} max|C|={:.3e}", cfg.m, cfg.n, k2pm::to_double(build.side.scale));
  write_output(o, k2pm::spline_artifact(build, samples).dump(2) + "\n");
  return 0;
}

int cmd_eval(const Options& o) {
  std::ifstream in(o.input);
  if (!in) throw k2pm::ConfigError("cannot open artifact " + o.input);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw k2pm::ConfigError(std::string("artifact: ") + e.what());
  }
  const auto spline = k2pm::load_spline_artifact<quad>(j);
  if (o.points < 2) throw k2pm::ConfigError("--points must be >= 2");
  if (!o.allow_extrapolation && (o.x_min < 0 || o.x_max > 1))
    throw k2pm::ConfigError("evaluation range leaves [0, 1]; pass --allow-extrapolation");

  std::ostringstream os;
  json rows = json::array();
  if (o.format == "csv") os << "x,S(x)\n";
  for (int i = 0; i < o.points; ++i) {
    const quad x = quad(o.x_min) + (quad(o.x_max) - quad(o.x_min)) * quad(i) / quad(o.points - 1);
    const double s = k2pm::to_double(k2pm::evaluate(spline.config, spline.coeffs, x, o.allow_extrapolation));
    if (o.format == "csv")
      os << fmt_double(k2pm::to_double(x)) << ',' << fmt_double(s) << '\n';
    else
      rows.push_back({{"x", k2pm::to_double(x)}, {"S", s}});
  }
  write_output(o, o.format == "csv" ? os.str() : rows.dump(2) + "\n");
  return 0;
}

int cmd_verify(const Options& o) {
  const auto cfg = config_from(o);
  const auto checks = k2pm::verify_config(cfg, o.seed);
  json out;
  out["config"] = config_json(cfg);
  out["checks"] = json::array();
  bool pass = true;
  for (const auto& c : checks) {
    out["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    pass = pass && c.pass;
    if (!c.pass) spdlog::error("check {} failed: {:.3e} > {:.1e}", c.name, c.value, c.tolerance);
  }
  out["pass"] = pass;
  write_output(o, out.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_compare(const Options& o) {
  const auto cfg = config_from(o);
  const auto samples = samples_from(o, cfg);
  const auto build = k2pm::build_spline(cfg, samples);
  const auto dense = k2pm::dense_solve(cfg, samples);
  const auto rep = k2pm::compare(build.coeffs, dense.coeffs, o.tolerance);
  auto family = [](const k2pm::FamilyDeviation& f) { return json{{"absolute", f.absolute}, {"scaled", f.scaled}}; };
  json out;
  out["config"] = config_json(cfg);
  out["deviation"] = {{"C", family(rep.C)}, {"d1", family(rep.d1)}, {"d2", family(rep.d2)}, {"r", family(rep.r)}};
  out["max_scaled_deviation"] = rep.worst_scaled();
  out["tolerance"] = rep.tolerance;
  out["oracle_condition"] = k2pm::to_double(dense.condition);
  out["oracle_residual"] = k2pm::to_double(dense.residual);
  out["boundary_condition"] = k2pm::to_double(build.boundary.condition);
  out["pass"] = rep.pass;
  write_output(o, out.dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

template <class F>
double min_seconds(int repeats, F&& f) {
  double best = 0;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = (i == 0 || s < best) ? s : best;
  }
  return best;
}

int cmd_bench(const Options& o) {
  std::ostringstream os;
  json rows = json::array();
  if (o.format == "csv") os << "n,coefficients_seconds,build_seconds,dense_seconds\n";
  for (int n : o.sizes) {
    Options local = o;
    local.n = n;
    const auto cfg = config_from(local);
    const auto samples = o.preset.empty() ? k2pm::preset_samples<quad>("random:" + std::to_string(o.seed), cfg)
                                          : k2pm::preset_samples(o.preset, cfg);
    const auto op = k2pm::build_operator(cfg);
    const auto bs = k2pm::solve_boundary(cfg, op, samples);
    const double coeff_s = min_seconds(o.repeats, [&] { (void)k2pm::compute_coefficients(cfg, op, bs, samples); });
    const double build_s = min_seconds(o.repeats, [&] { (void)k2pm::build_spline(cfg, samples); });
    double dense_s = -1;
    if (n <= o.dense_max) dense_s = min_seconds(1, [&] { (void)k2pm::dense_solve(cfg, samples); });
    spdlog::info("n={} coefficients={:.3e}s build={:.3e}s", n, coeff_s, build_s);
    if (o.format == "csv") {
      os << n << ',' << fmt_double(coeff_s) << ',' << fmt_double(build_s) << ',' << (dense_s < 0 ? "" : fmt_double(dense_s))
         << '\n';
    } else {
      json row{{"n", n}, {"coefficients_seconds", coeff_s}, {"build_seconds", build_s}};
      row["dense_seconds"] = dense_s < 0 ? json(nullptr) : json(dense_s);
      rows.push_back(row);
    }
  }
  write_output(o, o.format == "csv" ? os.str() : rows.dump(2) + "\n");
  return 0;
}

void add_config_flags(CLI::App* sub, Options& o, bool need_n = true) {
  sub->add_option("--m", o.m, "Operator order m >= 2")->required();
  sub->add_option("--omega", o.omega, "Frequency omega > 0")->required();
  if (need_n) sub->add_option("--n", o.n, "Number of intervals N")->required();
}

void fail_line(const char* kind, const std::string& reason) {
  std::cerr << json{{"error", kind}, {"reason", reason}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  Options o;
  CLI::App app{"Interpolation splines minimizing the K2(P_m) semi-norm"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Construct a spline and write a JSON artifact");
  add_config_flags(build, o);
  build->add_option("--input", o.input, "CSV of beta,value or x,value rows");
  build->add_option("--preset", o.preset, "sin | cos | poly:<a> | runge | random:<seed>");
  build->add_option("--output", o.output, "Artifact path (stdout if omitted)");

  auto* eval = app.add_subcommand("eval", "Evaluate an artifact on equispaced points");
  eval->add_option("--input", o.input, "Artifact produced by build")->required();
  eval->add_option("--points", o.points, "Number of evaluation points");
  eval->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  eval->add_option("--output", o.output, "Output path (stdout if omitted)");
  eval->add_option("--x-min", o.x_min, "Left end of the evaluation range");
  eval->add_option("--x-max", o.x_max, "Right end of the evaluation range");
  eval->add_flag("--allow-extrapolation", o.allow_extrapolation, "Permit points outside [0, 1]");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite for one configuration");
  add_config_flags(verify, o);
  verify->add_option("--seed", o.seed, "Seed for random sample sets");
  verify->add_option("--output", o.output, "Report path (stdout if omitted)");

  auto* cmp = app.add_subcommand("compare", "Compare against the dense reference solve");
  add_config_flags(cmp, o);
  cmp->add_option("--input", o.input, "CSV of beta,value or x,value rows");
  cmp->add_option("--preset", o.preset, "sin | cos | poly:<a> | runge | random:<seed>");
  cmp->add_option("--tolerance", o.tolerance, "Maximum scaled coefficient deviation");
  cmp->add_option("--output", o.output, "Report path (stdout if omitted)");

  auto* bench = app.add_subcommand("bench", "Time construction over a sweep of N");
  add_config_flags(bench, o, false);
  bench->add_option("--sizes", o.sizes, "Values of N")->delimiter(',');
  bench->add_option("--dense-max", o.dense_max, "Largest N timed with the dense solve");
  bench->add_option("--repeats", o.repeats, "Timing repeats (minimum is reported)");
  bench->add_option("--preset", o.preset, "Sample preset (default random:<seed>)");
  bench->add_option("--seed", o.seed, "Seed for the default random preset");
  bench->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--output", o.output, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail_line("config", e.what());
    return 2;
  }

  // Grids and timing tables default to CSV.
  if ((eval->parsed() && eval->count("--format") == 0) || (bench->parsed() && bench->count("--format") == 0))
    o.format = "csv";

  try {
    if (build->parsed()) return cmd_build(o);
    if (eval->parsed()) return cmd_eval(o);
    if (verify->parsed()) return cmd_verify(o);
    if (cmp->parsed()) return cmd_compare(o);
    return cmd_bench(o);
  } catch (const k2pm::ConfigError& e) {
    fail_line("config", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    fail_line("config", e.what());
    return 2;
  } catch (const k2pm::NumericError& e) {
    fail_line("numeric", e.what());
    return 3;
  } catch (const std::exception& e) {
    fail_line("internal", e.what());
    return 3;
  }
}
