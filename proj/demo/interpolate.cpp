// Interpolate the Runge function with m = 3, omega = 1 on 21 nodes and print
// the spline next to the data on a fine grid.

#include "k2pm/io.hpp"
#include "k2pm/spline_builder.hpp"
#include "k2pm/spline_eval.hpp"

#include <cstdio>

int main() {
  using k2pm::quad;
  const k2pm::SplineConfig<quad> cfg{3, quad(1), 20};
  const auto samples = k2pm::preset_samples<quad>("runge", cfg);
  const auto spline = k2pm::build_spline(cfg, samples);

  std::printf("lambda:");
  for (const auto& l : spline.op.lambda) std::printf(" %.6f", k2pm::to_double(l.real()));
  std::printf("\nd1 = %.12f  d2 = %.12f  r0 = %.12f\n", k2pm::to_double(spline.coeffs.d1),
              k2pm::to_double(spline.coeffs.d2), k2pm::to_double(spline.coeffs.r[0]));

  std::printf("%8s %16s %16s\n", "x", "S(x)", "runge(x)");
  for (int i = 0; i <= 40; ++i) {
    const quad x = quad(i) / 40;
    const quad f = 1 / (1 + 25 * (x - quad(0.5)) * (x - quad(0.5)));
    std::printf("%8.4f %16.12f %16.12f\n", k2pm::to_double(x), k2pm::to_double(k2pm::evaluate(cfg, spline.coeffs, x)),
                k2pm::to_double(f));
  }
  std::printf("semi-norm: %.12f\n", k2pm::to_double(k2pm::seminorm(cfg, spline.coeffs, 10 * (cfg.n + 1))));
}
