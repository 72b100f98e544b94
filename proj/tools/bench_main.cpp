// Timings for the threaded kernels against their serial reference
// implementations. The serial versions are independent formulations kept for
// testing; this tool reports the throughput gap and cross-checks agreement.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "frost/geometry.hpp"
#include "frost/kernels.hpp"
#include "frost/velocity.hpp"

using frost::Field;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double best_time(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_seconds();
    f();
    best = std::min(best, now_seconds() - t0);
  }
  return best;
}

double uniform(std::mt19937_64& eng, double lo, double hi) {
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

void report(const char* name, double serial, double parallel, double diff) {
  std::printf("%-28s serial %10.3f ms   threaded %10.3f ms   x%.2f   max diff %.3e\n", name,
              serial * 1e3, parallel * 1e3, serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--quick") quick = true;

  std::mt19937_64 eng(12345);

  // Deterministic chunked dot product.
  {
    const std::size_t n = quick ? 400000 : 4000000;
    const int reps = quick ? 5 : 20;
    Field a(n), b(n);
    for (auto& v : a) v = uniform(eng, -1, 1);
    for (auto& v : b) v = uniform(eng, -1, 1);
    double s = 0, p = 0;
    const double ts = best_time(reps, [&] { s = frost::kernels::det_dot_serial(a, b); });
    const double tp = best_time(reps, [&] { p = frost::kernels::det_dot(a, b); });
    report("det_dot", ts, tp, std::abs(s - p));
  }

  // System operator: gather (threaded) vs face scatter (serial).
  {
    const int nx = quick ? 70 : 384;
    const int ny = quick ? 80 : 384;
    const int reps = quick ? 20 : 10;
    const frost::StructuredGrid grid = frost::uniform_fluid_grid(nx, ny, 0.35, 0.40);
    frost::kernels::SystemCoeffs sys;
    sys.resize(nx, ny);
    sys.adv_scale_x = 1.0;
    sys.adv_scale_y = 1.0;
    for (auto& v : sys.local_diag) v = uniform(eng, 1, 2);
    for (auto& v : sys.xtrans) v = uniform(eng, 0, 1);
    for (auto& v : sys.ytrans) v = uniform(eng, 0, 1);
    for (auto& c : sys.adv.x)
      for (auto& v : c) v = uniform(eng, -0.1, 0.1);
    for (auto& c : sys.adv.y)
      for (auto& v : c) v = uniform(eng, -0.1, 0.1);
    Field x(grid.cell_count()), out_s(grid.cell_count()), out_p(grid.cell_count());
    for (auto& v : x) v = uniform(eng, -20, 20);
    const double ts = best_time(reps, [&] { frost::kernels::apply_system_serial(sys, x, out_s); });
    const double tp = best_time(reps, [&] { frost::kernels::apply_system(sys, x, out_p); });
    double diff = 0;
    for (int i = 0; i < grid.cell_count(); ++i) diff = std::max(diff, std::abs(out_s[i] - out_p[i]));
    report("apply_system", ts, tp, diff);
  }

  // Advection linearization: threaded coefficient assembly vs the serial
  // direct flux evaluation it must agree with at the freezing state.
  {
    const int nx = quick ? 70 : 384;
    const int ny = quick ? 80 : 384;
    const int reps = quick ? 20 : 10;
    const frost::StructuredGrid grid = frost::uniform_fluid_grid(nx, ny, 0.35, 0.40);
    frost::VelocityField vel = frost::VelocityField::zero(grid);
    for (auto& v : vel.u) v = uniform(eng, -0.3, 0.3);
    for (auto& v : vel.v) v = uniform(eng, -0.3, 0.3);
    Field T(grid.cell_count());
    for (auto& v : T) v = uniform(eng, -25, 25);
    frost::kernels::AdvectionCoeffs coeffs;
    Field div_direct(grid.cell_count()), div_coeff(grid.cell_count());
    const double ts = best_time(
        reps, [&] { frost::kernels::advective_divergence_direct(grid, vel, T, 1.0, 1.0, div_direct); });
    const double tp =
        best_time(reps, [&] { frost::kernels::build_advection_coefficients(grid, vel, T, coeffs); });

    // One application of the frozen coefficients to T itself reproduces the
    // direct divergence; fold it into the cross-check.
    frost::kernels::SystemCoeffs sys;
    sys.resize(nx, ny);
    sys.adv_scale_x = 1.0;
    sys.adv_scale_y = 1.0;
    sys.adv = coeffs;
    frost::kernels::apply_system(sys, T, div_coeff);
    double diff = 0;
    for (int i = 0; i < grid.cell_count(); ++i)
      diff = std::max(diff, std::abs(div_direct[i] - div_coeff[i]));
    report("advection_coefficients", ts, tp, diff);
  }

  return 0;
}
