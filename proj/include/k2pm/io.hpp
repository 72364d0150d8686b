#pragma once

// Sample ingestion (CSV and named presets) and the JSON spline artifact.

#include "k2pm/spline_builder.hpp"

#include "json.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace k2pm {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool parse_integer(const std::string& s, long long& out) {
  std::size_t pos = 0;
  try {
    out = std::stoll(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

// Uniform on [-1, 1) from the top 53 bits, independent of the standard
// library's distribution implementation.
inline double unit_interval_symmetric(std::mt19937_64& rng) {
  const std::uint64_t bits = rng() >> 11;
  return std::ldexp(static_cast<double>(bits), -52) - 1.0;
}

}  // namespace detail

/// Reads "beta,value" or "x,value" rows. One key kind applies to the whole
/// file: coordinates when the header names the first column "x" or any key is
/// not an integer literal, node indices otherwise. x must lie within 1e-12 of
/// the uniform grid; every node 0..N must appear exactly once.
template <RealScalar Real>
SampleSet<Real> read_samples_csv(std::istream& in, const SplineConfig<Real>& cfg) {
  using std::abs;
  using std::round;
  struct Row {
    int line_no;
    std::string key, value;
  };
  std::vector<Row> rows;
  bool by_coordinate = false;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("csv line " + std::to_string(line_no) + ": expected two columns");
    Row row{line_no, detail::trim(line.substr(0, comma)), detail::trim(line.substr(comma + 1))};
    const bool header = first && !row.key.empty() && std::isalpha(static_cast<unsigned char>(row.key[0]));
    first = false;
    if (header) {
      by_coordinate = row.key == "x";
      continue;
    }
    long long ignored = 0;
    if (!detail::parse_integer(row.key, ignored)) by_coordinate = true;
    rows.push_back(std::move(row));
  }

  std::vector<Real> values(cfg.n + 1, Real(0));
  std::vector<bool> seen(cfg.n + 1, false);
  for (const auto& row : rows) {
    const std::string where = "csv line " + std::to_string(row.line_no);
    long long beta = 0;
    if (by_coordinate) {
      Real x;
      try {
        x = from_decimal<Real>(row.key);
      } catch (const std::exception&) {
        throw ConfigError(where + ": bad node '" + row.key + "'");
      }
      const Real nearest = round(x * Real(cfg.n));
      if (abs(x - nearest / Real(cfg.n)) > Real(1e-12))
        throw ConfigError(where + ": x=" + row.key + " is not on the uniform grid");
      beta = static_cast<long long>(to_double(nearest));
    } else {
      detail::parse_integer(row.key, beta);
    }
    if (beta < 0 || beta > cfg.n) throw ConfigError(where + ": node index out of range");
    if (seen[beta]) throw ConfigError(where + ": duplicate node");
    try {
      values[beta] = from_decimal<Real>(row.value);
    } catch (const std::exception&) {
      throw ConfigError(where + ": bad value '" + row.value + "'");
    }
    seen[beta] = true;
  }
  for (int b = 0; b <= cfg.n; ++b)
    if (!seen[b]) throw ConfigError("csv: missing node " + std::to_string(b));
  SampleSet<Real> s{std::move(values)};
  s.validate(cfg);
  return s;
}

/// Presets: sin, cos, poly:<a>, runge, random:<seed>.
template <RealScalar Real>
SampleSet<Real> preset_samples(const std::string& name, const SplineConfig<Real>& cfg) {
  using std::cos;
  using std::sin;
  SampleSet<Real> s;
  s.values.resize(cfg.n + 1);
  const auto colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  long long param = 0;
  if (kind == "poly" || kind == "random") {
    if (!detail::parse_integer(arg, param) || param < 0) throw ConfigError("preset " + kind + " needs a non-negative integer");
  } else if (colon != std::string::npos) {
    throw ConfigError("preset " + kind + " takes no argument");
  }

  if (kind == "random") {
    std::mt19937_64 rng(static_cast<std::uint64_t>(param));
    for (auto& v : s.values) v = Real(detail::unit_interval_symmetric(rng));
    return s;
  }
  for (int b = 0; b <= cfg.n; ++b) {
    const Real x = cfg.node(b);
    if (kind == "sin")
      s.values[b] = sin(cfg.omega * x);
    else if (kind == "cos")
      s.values[b] = cos(cfg.omega * x);
    else if (kind == "poly")
      s.values[b] = ipow(x, static_cast<int>(param));
    else if (kind == "runge")
      s.values[b] = Real(1) / (Real(1) + Real(25) * (x - Real(0.5)) * (x - Real(0.5)));
    else
      throw ConfigError("unknown preset '" + name + "'");
  }
  return s;
}

namespace detail {

template <RealScalar Real>
nlohmann::json doubles(const std::vector<Real>& v) {
  auto out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

template <RealScalar Real>
nlohmann::json exact(const std::vector<Real>& v) {
  auto out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_decimal(x));
  return out;
}

template <RealScalar Real>
std::vector<Real> read_exact(const nlohmann::json& j) {
  std::vector<Real> out;
  for (const auto& x : j) out.push_back(from_decimal<Real>(x.get<std::string>()));
  return out;
}

}  // namespace detail

/// Deterministic JSON artifact. Doubles are written shortest-round-trip; the
/// `exact` block repeats every working-precision number as a decimal string.
template <RealScalar Real>
nlohmann::json spline_artifact(const SplineBuild<Real>& b, const SampleSet<Real>& samples) {
  using nlohmann::json;
  const auto& cfg = b.config;
  json j;
  j["format"] = "k2pm-spline";
  j["version"] = 1;
  j["config"] = {{"m", cfg.m}, {"omega", to_double(cfg.omega)}, {"n", cfg.n}};
  j["samples"] = detail::doubles(samples.values);
  j["coefficients"] = {{"C", detail::doubles(b.coeffs.C)},
                       {"d1", to_double(b.coeffs.d1)},
                       {"d2", to_double(b.coeffs.d2)},
                       {"r", detail::doubles(b.coeffs.r)}};
  j["exact"] = {{"omega", to_decimal(cfg.omega)},
                {"samples", detail::exact(samples.values)},
                {"C", detail::exact(b.coeffs.C)},
                {"d1", to_decimal(b.coeffs.d1)},
                {"d2", to_decimal(b.coeffs.d2)},
                {"r", detail::exact(b.coeffs.r)}};
  auto lambda = json::array();
  for (const auto& l : b.op.lambda) lambda.push_back({{"re", to_double(l.real())}, {"im", to_double(l.imag())}});
  j["lambda"] = lambda;
  auto powers = json::array();
  for (const auto& v : b.side.power) powers.push_back(to_double(v));
  j["diagnostics"] = {{"boundary_condition", to_double(b.boundary.condition)},
                      {"boundary_ill_conditioned", b.ill_conditioned},
                      {"side_conditions",
                       {{"sin", to_double(b.side.sin)},
                        {"cos", to_double(b.side.cos)},
                        {"power", powers},
                        {"scale", to_double(b.side.scale)},
                        {"max_scaled", to_double(b.side.max_scaled())}}}};
  return j;
}

template <RealScalar Real>
struct LoadedSpline {
  SplineConfig<Real> config;
  SampleSet<Real> samples;
  SplineCoefficients<Real> coeffs;
};

template <RealScalar Real>
LoadedSpline<Real> load_spline_artifact(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "k2pm-spline") throw ConfigError("artifact: unknown format");
    LoadedSpline<Real> out;
    const auto& ex = j.at("exact");
    out.config.m = j.at("config").at("m").get<int>();
    out.config.n = j.at("config").at("n").get<int>();
    out.config.omega = from_decimal<Real>(ex.at("omega").get<std::string>());
    out.config.validate();
    out.samples.values = detail::read_exact<Real>(ex.at("samples"));
    out.coeffs.C = detail::read_exact<Real>(ex.at("C"));
    out.coeffs.d1 = from_decimal<Real>(ex.at("d1").get<std::string>());
    out.coeffs.d2 = from_decimal<Real>(ex.at("d2").get<std::string>());
    out.coeffs.r = detail::read_exact<Real>(ex.at("r"));
    if (static_cast<int>(out.coeffs.C.size()) != out.config.n + 1 ||
        static_cast<int>(out.coeffs.r.size()) != out.config.m - 2)
      throw ConfigError("artifact: coefficient arrays do not match config");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("artifact: ") + e.what());
  }
}

}  // namespace k2pm
