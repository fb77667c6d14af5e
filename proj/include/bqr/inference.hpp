#pragma once

#include <cstdint>

#include "bqr/classical.hpp"
#include "bqr/types.hpp"

namespace bqr {

struct BootstrapConfig {
  int replications = 500;
  std::uint64_t seed = 0;

  void validate() const {
    if (replications < 100)
      throw std::invalid_argument("bootstrap requires at least 100 replications");
  }
};

enum class ExecutionPolicy { Serial, Parallel };

// Pairs-bootstrap draws of the fitted coefficient at each grid quantile,
// one row per replication, one column per quantile. Resampling indices are
// shared across quantiles within a replication and derived from per-
// replication seeds, so the result is identical under either policy.
Matrix bootstrap_coefficients(const Matrix& X, const Vector& y,
                              const std::vector<QuantileLevel>& tau_grid,
                              Eigen::Index coefficient_index, const BootstrapConfig& cfg,
                              ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Wald test of slope equality between two quantiles:
// W = (d_hat(tau_high) - d_hat(tau_low))^2 / Var_boot(difference), chi^2(1).
TestResult slope_equality_test(const Matrix& X, const Vector& y, const QuantileLevel& tau_low,
                               const QuantileLevel& tau_high, Eigen::Index coefficient_index,
                               const BootstrapConfig& cfg,
                               ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Wald test of slope equality across a full quantile grid using the
// bootstrap covariance of the coefficient vector; df = grid size - 1,
// reduced to the numerical rank when the covariance is singular.
TestResult joint_slope_test(const Matrix& X, const Vector& y,
                            const std::vector<QuantileLevel>& tau_grid,
                            Eigen::Index coefficient_index, const BootstrapConfig& cfg,
                            ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace bqr
