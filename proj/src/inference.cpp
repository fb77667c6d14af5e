#include <cmath>

#include "bqr/inference.hpp"
#include "bqr/rng.hpp"
#include "bqr/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bqr {

namespace {

// One replication: resample rows with the replication's own seed, fit every
// grid quantile on the shared resample.
void one_replication(const Matrix& X, const Vector& y,
                     const std::vector<QuantileLevel>& tau_grid,
                     Eigen::Index coefficient_index, std::uint64_t rep_seed, Matrix& draws,
                     int b) {
  const Eigen::Index n = X.rows();
  Rng rng(rep_seed);
  Matrix Xb(n, X.cols());
  Vector yb(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto idx = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
    if (idx >= n) idx = n - 1;
    Xb.row(i) = X.row(idx);
    yb(i) = y(idx);
  }
  for (std::size_t t = 0; t < tau_grid.size(); ++t) {
    QrResult fit = qr_fit(Xb, yb, tau_grid[t]);
    draws(b, static_cast<Eigen::Index>(t)) = fit.coefficients(coefficient_index);
  }
}

}  // namespace

Matrix bootstrap_coefficients(const Matrix& X, const Vector& y,
                              const std::vector<QuantileLevel>& tau_grid,
                              Eigen::Index coefficient_index, const BootstrapConfig& cfg,
                              ExecutionPolicy policy) {
  cfg.validate();
  if (tau_grid.empty()) throw std::invalid_argument("bootstrap_coefficients: empty grid");
  if (coefficient_index < 0 || coefficient_index >= X.cols())
    throw std::invalid_argument("bootstrap_coefficients: coefficient index out of range");

  const int B = cfg.replications;
  Matrix draws(B, static_cast<Eigen::Index>(tau_grid.size()));
  if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < B; ++b)
      one_replication(X, y, tau_grid, coefficient_index,
                      derive_seed(cfg.seed, static_cast<std::uint64_t>(b)), draws, b);
  } else {
    for (int b = 0; b < B; ++b)
      one_replication(X, y, tau_grid, coefficient_index,
                      derive_seed(cfg.seed, static_cast<std::uint64_t>(b)), draws, b);
  }
  return draws;
}

TestResult slope_equality_test(const Matrix& X, const Vector& y, const QuantileLevel& tau_low,
                               const QuantileLevel& tau_high, Eigen::Index coefficient_index,
                               const BootstrapConfig& cfg, ExecutionPolicy policy) {
  if (!(tau_low.tau() < tau_high.tau()))
    throw std::invalid_argument("slope_equality_test: requires tau_low < tau_high");

  QrResult lo = qr_fit(X, y, tau_low);
  QrResult hi = qr_fit(X, y, tau_high);
  const double diff = hi.coefficients(coefficient_index) - lo.coefficients(coefficient_index);

  Matrix draws = bootstrap_coefficients(X, y, {tau_low, tau_high}, coefficient_index, cfg, policy);
  Vector d = draws.col(1) - draws.col(0);
  const double mean = d.mean();
  const double var = (d.array() - mean).square().sum() / static_cast<double>(d.size() - 1);
  if (var < 1e-12)
    throw DegenerateVarianceError("slope_equality_test: bootstrap variance below 1e-12");

  const double stat = diff * diff / var;
  return {"slope-equality (bootstrap Wald)", stat, 1, stats::chi_squared_sf(stat, 1)};
}

TestResult joint_slope_test(const Matrix& X, const Vector& y,
                            const std::vector<QuantileLevel>& tau_grid,
                            Eigen::Index coefficient_index, const BootstrapConfig& cfg,
                            ExecutionPolicy policy) {
  const auto G = static_cast<Eigen::Index>(tau_grid.size());
  if (G < 3) throw std::invalid_argument("joint_slope_test: need at least three quantiles");

  Vector point(G);
  for (Eigen::Index t = 0; t < G; ++t)
    point(t) = qr_fit(X, y, tau_grid[t]).coefficients(coefficient_index);

  Matrix draws = bootstrap_coefficients(X, y, tau_grid, coefficient_index, cfg, policy);
  const Eigen::Index B = draws.rows();
  Eigen::RowVectorXd mean = draws.colwise().mean();
  Matrix centered = draws.rowwise() - mean;
  Matrix cov = centered.transpose() * centered / static_cast<double>(B - 1);

  // Differences against the first grid quantile.
  Matrix D = Matrix::Zero(G - 1, G);
  for (Eigen::Index r = 0; r < G - 1; ++r) {
    D(r, 0) = -1.0;
    D(r, r + 1) = 1.0;
  }
  Vector d = D * point;
  Matrix S = D * cov * D.transpose();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  const Vector& ev = eig.eigenvalues();
  const double thresh = std::max(1e-12, 1e-10 * ev.cwiseAbs().maxCoeff());
  int rank = 0;
  Vector proj = eig.eigenvectors().transpose() * d;
  double stat = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > thresh) {
      stat += proj(i) * proj(i) / ev(i);
      ++rank;
    }
  }
  if (rank == 0)
    throw DegenerateVarianceError("joint_slope_test: bootstrap covariance has rank 0");

  const char* name = rank == G - 1 ? "joint slope equality (bootstrap Wald)"
                                   : "joint slope equality (bootstrap Wald, rank-reduced)";
  return {name, stat, rank, stats::chi_squared_sf(stat, rank)};
}

}  // namespace bqr
