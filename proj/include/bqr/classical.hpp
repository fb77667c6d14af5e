#pragma once

#include "bqr/types.hpp"

namespace bqr {

struct OlsResult {
  Vector coefficients;
  Vector std_errors;
  Vector t_stats;
  Vector p_values;
  Vector residuals;
  double sigma2_hat = 0.0;
  double rss = 0.0;
};

struct QrResult {
  double tau;
  Vector coefficients;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Check (pinball) loss: u * (tau - 1{u < 0}). Nonnegative, zero iff u == 0.
inline double check_loss(const QuantileLevel& tau, double u) {
  return u * (u < 0.0 ? tau.tau() - 1.0 : tau.tau());
}

double check_loss_sum(const QuantileLevel& tau, const Vector& residuals);

// Least squares with classical t-based inference. Requires n > p and full
// column rank.
OlsResult ols_fit(const Matrix& X, const Vector& y);

// Quantile regression by majorize-minimize on the smoothed check loss,
// epsilon schedule 1e-2 down to 1e-6, followed by an exact-fit vertex polish.
QrResult qr_fit(const Matrix& X, const Vector& y, const QuantileLevel& tau,
                int max_iterations = 10000);

}  // namespace bqr
