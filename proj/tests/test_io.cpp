#include "k2pm/io.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using k2pm::quad;
using test::d;

namespace {

k2pm::SampleSet<double> csv(const std::string& text, int n = 4) {
  std::istringstream in(text);
  return k2pm::read_samples_csv(in, k2pm::SplineConfig<double>{2, 1.0, n});
}

}  // namespace

TEST_CASE("csv samples by index and by coordinate") {
  CHECK(csv("0,1\n1,2\n2,3\n3,4\n4,5\n").values == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(csv("x,phi\n0.0,1\n0.25,2\n0.5,3\n0.75,4\n1.0,5\n").values == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(csv("# comment\n\n4, 5\n 3 ,4\n2,3\n1,2\n0,1e0\n").values == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(csv("0.0,1\n0.2500000000001,2\n0.5,3\n0.75,4\n1,5\n").values[1] == 2.0);
  // Integer keys are coordinates once the file is known to hold coordinates.
  CHECK(csv("x,value\n0,1\n0.25,2\n0.5,3\n0.75,4\n1,5\n").values == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(csv("beta,value\n0,1\n1,2\n2,3\n3,4\n4,5\n").values == std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("csv rejections") {
  CHECK_THROWS_AS(csv("0,1\n1,2\n2,3\n3,4\n"), k2pm::ConfigError);            // missing node
  CHECK_THROWS_AS(csv("0,1\n1,2\n1,3\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);  // duplicate
  CHECK_THROWS_AS(csv("0,1\n1,2\n2,3\n3,4\n5,5\n"), k2pm::ConfigError);       // out of range
  CHECK_THROWS_AS(csv("0,1\n0.3,2\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);     // off grid
  CHECK_THROWS_AS(csv("0,1\n1,abc\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);     // bad value
  CHECK_THROWS_AS(csv("0,1\n1,2x\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);      // trailing text
  CHECK_THROWS_AS(csv("0,1\n1 2\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);       // one column
  CHECK_THROWS_AS(csv("0,1\nfoo,2\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);     // header only on line 1
  CHECK_THROWS_AS(csv("x,value\n0,1\n1,2\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);
  CHECK_THROWS_AS(csv("0,1\n1,nan\n2,3\n3,4\n4,5\n"), k2pm::ConfigError);
}

TEST_CASE("presets") {
  const k2pm::SplineConfig<quad> cfg{3, quad(2), 8};
  const auto s = k2pm::preset_samples<quad>("sin", cfg);
  for (int b = 0; b <= 8; ++b) CHECK(d(abs(s.values[b] - sin(quad(2) * quad(b) / 8))) == 0.0);
  const auto c = k2pm::preset_samples<quad>("cos", cfg);
  CHECK(c.values[0] == 1);
  const auto p = k2pm::preset_samples<quad>("poly:2", cfg);
  CHECK(p.values[4] == quad(0.25));
  const auto r = k2pm::preset_samples<quad>("runge", cfg);
  CHECK(r.values[4] == 1);
  CHECK(d(r.values[0]) == Catch::Approx(1.0 / (1.0 + 25 * 0.25)));

  const auto a = k2pm::preset_samples<quad>("random:42", cfg);
  const auto b = k2pm::preset_samples<quad>("random:42", cfg);
  const auto other = k2pm::preset_samples<quad>("random:43", cfg);
  CHECK(a.values == b.values);
  CHECK(a.values != other.values);
  for (const auto& v : a.values) {
    CHECK(v >= -1);
    CHECK(v < 1);
  }

  for (const char* bad : {"square", "poly", "poly:-1", "poly:x", "random:", "sin:3"})
    CHECK_THROWS_AS(k2pm::preset_samples<quad>(bad, cfg), k2pm::ConfigError);
}

TEST_CASE("spline artifact") {
  const k2pm::SplineConfig<quad> cfg{4, k2pm::from_decimal<quad>("0.5"), 15};
  const auto s = k2pm::preset_samples<quad>("random:9", cfg);
  const auto b = k2pm::build_spline(cfg, s);
  const auto j = k2pm::spline_artifact(b, s);

  CHECK(j.at("format") == "k2pm-spline");
  CHECK(j.at("config").at("m") == 4);
  CHECK(j.at("coefficients").at("C").size() == 16);
  CHECK(j.at("coefficients").at("r").size() == 2);
  CHECK(j.at("lambda").size() == 3);
  CHECK(j.at("diagnostics").at("side_conditions").at("max_scaled").get<double>() <= 1e-8);
  CHECK(j.dump() == k2pm::spline_artifact(k2pm::build_spline(cfg, s), s).dump());

  const auto loaded = k2pm::load_spline_artifact<quad>(nlohmann::json::parse(j.dump()));
  CHECK(loaded.config.m == 4);
  CHECK(loaded.config.n == 15);
  CHECK(loaded.config.omega == cfg.omega);
  CHECK(loaded.samples.values == s.values);
  CHECK(loaded.coeffs.C == b.coeffs.C);
  CHECK(loaded.coeffs.d1 == b.coeffs.d1);
  CHECK(loaded.coeffs.d2 == b.coeffs.d2);
  CHECK(loaded.coeffs.r == b.coeffs.r);

  auto broken = j;
  broken["format"] = "other";
  CHECK_THROWS_AS(k2pm::load_spline_artifact<quad>(broken), k2pm::ConfigError);
  broken = j;
  broken["exact"].erase("C");
  CHECK_THROWS_AS(k2pm::load_spline_artifact<quad>(broken), k2pm::ConfigError);
  broken = j;
  broken["config"]["n"] = 14;
  CHECK_THROWS_AS(k2pm::load_spline_artifact<quad>(broken), k2pm::ConfigError);
}
