#pragma once

#include <cstdint>

#include "bqr/types.hpp"

namespace bqr {

// Weakly informative defaults keep the posterior proper with its mode near
// the frequentist estimate.
struct BqrPrior {
  double beta_mean = 0.0;        // common prior mean for every coefficient
  double beta_variance = 1e4;    // isotropic, 100^2
  double sigma_shape = 0.01;
  double sigma_rate = 0.01;

  void validate() const {
    if (!(beta_variance > 0.0) || !(sigma_shape > 0.0) || !(sigma_rate > 0.0))
      throw std::invalid_argument("prior hyperparameters must be positive");
  }
};

struct McmcConfig {
  int draws = 11000;
  int burn_in = 1000;
  int thin = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (draws < 1 || burn_in < 0 || thin < 1)
      throw std::invalid_argument("invalid MCMC configuration");
  }
};

// Log density of the asymmetric Laplace with scale sigma:
// log[tau(1-tau)/sigma] - rho_tau(u)/sigma.
double asl_log_density(double u, const QuantileLevel& tau, double sigma);

// Location and variance multipliers of the normal-given-latent mixture:
// y_i | z_i ~ Normal(x_i'beta + theta z_i, psi2 sigma z_i), z_i ~ Exp(mean sigma).
struct MixtureConstants {
  double theta;
  double psi2;
};
MixtureConstants mixture_constants(const QuantileLevel& tau);

// Gibbs sampler for Bayesian quantile regression via the normal scale
// mixture: (beta | z, sigma) multivariate normal, (z_i | beta, sigma)
// generalized inverse Gaussian sampled through the reciprocal
// inverse-Gaussian identity, (sigma | beta, z) inverse gamma. Bitwise
// deterministic given cfg.seed.
PosteriorChain bqr_fit(const Matrix& X, const Vector& y, const QuantileLevel& tau,
                       const BqrPrior& prior, const McmcConfig& cfg,
                       const std::vector<std::string>& names = {});

// Posterior mean, equal-tailed credible interval, two-sided tail probability
// 2*min(P(>0), P(<0)) and the star code it maps to.
std::vector<CoefficientRow> summarize_chain(const PosteriorChain& chain, double interval_mass);

// Split-chain potential scale reduction per coefficient. Chains with zero
// within variance report 1.0.
std::vector<double> chain_diagnostics(const std::vector<PosteriorChain>& chains,
                                      bool split = true);

}  // namespace bqr
