// Times the pairs-bootstrap kernel under the serial reference implementation
// and the OpenMP-parallel one, and verifies the outputs agree bitwise.

#include <chrono>
#include <cstdio>

#include "bqr/dgp.hpp"
#include "bqr/design.hpp"
#include "bqr/inference.hpp"

using namespace bqr;

namespace {

double time_run(const Matrix& X, const Vector& y, const std::vector<QuantileLevel>& grid,
                const BootstrapConfig& cfg, ExecutionPolicy policy, Matrix& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = bootstrap_coefficients(X, y, grid, 1, cfg, policy);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 2000;
  int reps = argc > 2 ? std::atoi(argv[2]) : 400;

  DgpConfig dc;
  dc.kind = DgpKind::LocationScale;
  dc.n = n;
  dc.seed = 12345;
  dc.beta = Vector(3);
  dc.beta << 1.0, 2.0, -1.0;
  dc.gamma = Vector(3);
  dc.gamma << 0.4, 0.3, 0.2;
  auto sim = simulate_dgp(dc);
  auto d = build_design(sim.dataset, {"y", {"x1", "x2"}, true, {}, std::nullopt});

  std::vector<QuantileLevel> grid;
  for (int t = 1; t <= 9; ++t) grid.emplace_back(0.1 * t);
  BootstrapConfig cfg{reps, 777};

  Matrix serial, parallel;
  double ts = time_run(d.X, d.y, grid, cfg, ExecutionPolicy::Serial, serial);
  double tp = time_run(d.X, d.y, grid, cfg, ExecutionPolicy::Parallel, parallel);
  bool identical = serial == parallel;

  std::printf("bootstrap kernel, n = %d, replications = %d, %zu quantiles\n", n, reps,
              grid.size());
  std::printf("  serial reference : %8.3f s\n", ts);
  std::printf("  OpenMP parallel  : %8.3f s  (speedup %.2fx)\n", tp, ts / tp);
  std::printf("  bitwise identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
