#pragma once

#include <cstdint>

#include "bqr/types.hpp"

namespace bqr {

enum class DgpKind { LocationScale, Simultaneous };
enum class NoiseKind { Normal, Laplace };

struct DgpConfig {
  DgpKind kind = DgpKind::LocationScale;
  int n = 500;
  Vector beta;   // location coefficients, includes intercept as entry 0
  Vector gamma;  // scale coefficients (location-scale kind)
  NoiseKind noise = NoiseKind::Normal;
  double rho = 0.0;  // endogeneity strength (simultaneous kind)
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimulatedData {
  Dataset dataset;
  // Location-scale: quantile_coefficient(j, tau) = beta_j + gamma_j F^{-1}(tau).
  // Simultaneous: structural slope is truth_beta(1); a valid instrument is in
  // column "w".
  Vector truth_beta;
  Vector truth_gamma;
  DgpKind kind;
  NoiseKind noise;

  double quantile_coefficient(Eigen::Index j, double tau) const;
};

// Location-scale kind: y = x'beta + (x'gamma) e with x'gamma > 0 enforced by
// rejection (at most 100 attempts). Simultaneous kind: structural equation
// y = b0 + b1 x + u with x = 0.5 + w + v, corr(u, v) = rho, w standard
// normal and a valid excluded instrument. Columns: y, x1.. (location-scale);
// y, x, w (simultaneous). Dates are a synthetic daily calendar.
SimulatedData simulate_dgp(const DgpConfig& cfg);

// Quantile function of the unit-variance noise distributions used above.
double noise_quantile(NoiseKind kind, double tau);

}  // namespace bqr
