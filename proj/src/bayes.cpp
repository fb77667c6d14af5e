#include <algorithm>
#include <cmath>

#include "bqr/bayes.hpp"
#include "bqr/classical.hpp"
#include "bqr/rng.hpp"

namespace bqr {

double asl_log_density(double u, const QuantileLevel& tau, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("asl_log_density: sigma must be positive");
  double t = tau.tau();
  return std::log(t * (1.0 - t) / sigma) - check_loss(tau, u) / sigma;
}

MixtureConstants mixture_constants(const QuantileLevel& tau) {
  double t = tau.tau();
  double tt = t * (1.0 - t);
  return {(1.0 - 2.0 * t) / tt, 2.0 / tt};
}

PosteriorChain bqr_fit(const Matrix& X, const Vector& y, const QuantileLevel& tau,
                       const BqrPrior& prior, const McmcConfig& cfg,
                       const std::vector<std::string>& names) {
  prior.validate();
  cfg.validate();
  const Eigen::Index n = X.rows(), p = X.cols();
  if (n <= p) throw DegenerateSampleError("bqr_fit: need n > p");

  const auto [theta, psi2] = mixture_constants(tau);
  Rng rng(cfg.seed);

  // Initialize at least squares with the check-loss scale of its residuals.
  Vector beta = Eigen::LDLT<Matrix>(Matrix(X.transpose() * X)).solve(X.transpose() * y);
  Vector resid = y - X * beta;
  double sigma = std::max(1e-6, check_loss_sum(tau, resid) / static_cast<double>(n));
  Vector z = Vector::Constant(n, sigma);

  const int kept = cfg.draws;
  const int total = cfg.burn_in + kept * cfg.thin;
  PosteriorChain chain;
  chain.tau = tau.tau();
  chain.beta_draws.resize(kept, p);
  chain.sigma_draws.resize(kept);
  chain.burn_in = cfg.burn_in;
  chain.thin = cfg.thin;
  chain.seed = cfg.seed;
  chain.regressor_names = names;

  const double prior_prec = 1.0 / prior.beta_variance;
  Matrix prec(p, p);
  Vector rhs(p);
  int stored = 0;

  for (int it = 0; it < total; ++it) {
    // z_i | beta, sigma ~ GIG(1/2, chi_i, psi_p): sample 1/z_i as inverse
    // Gaussian with mean sqrt(psi_p / chi_i) and shape psi_p.
    resid = y - X * beta;
    const double psi_p = theta * theta / (psi2 * sigma) + 2.0 / sigma;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d2 = std::max(resid(i) * resid(i), 1e-14 * sigma * sigma);
      double chi = d2 / (psi2 * sigma);
      double w = rng.inverse_gaussian(std::sqrt(psi_p / chi), psi_p);
      z(i) = 1.0 / w;
    }

    // beta | z, sigma: Gaussian with precision prior_prec I + sum w_i x x'.
    prec.setZero();
    rhs.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      double w = 1.0 / (psi2 * sigma * z(i));
      prec.noalias() += w * (X.row(i).transpose() * X.row(i));
      rhs += w * (y(i) - theta * z(i)) * X.row(i).transpose();
    }
    prec.diagonal().array() += prior_prec;
    rhs.array() += prior_prec * prior.beta_mean;
    Eigen::LLT<Matrix> llt(prec);
    if (llt.info() != Eigen::Success)
      throw SamplerDivergenceError("bqr_fit: singular precision at iteration " +
                                   std::to_string(it));
    Vector mean = llt.solve(rhs);
    Vector noise(p);
    for (Eigen::Index j = 0; j < p; ++j) noise(j) = rng.normal();
    beta = mean + llt.matrixU().solve(noise);

    // sigma | beta, z: inverse gamma.
    resid = y - X * beta;
    double rate = prior.sigma_rate;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = resid(i) - theta * z(i);
      rate += d * d / (2.0 * psi2 * z(i)) + z(i);
    }
    double shape = prior.sigma_shape + 1.5 * static_cast<double>(n);
    sigma = rng.inverse_gamma(shape, rate);

    if (!std::isfinite(sigma) || !beta.allFinite())
      throw SamplerDivergenceError("bqr_fit: non-finite draw at iteration " +
                                   std::to_string(it));

    if (it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0 && stored < kept) {
      chain.beta_draws.row(stored) = beta.transpose();
      chain.sigma_draws(stored) = sigma;
      ++stored;
    }
  }
  return chain;
}

namespace {

double sorted_quantile(std::vector<double>& v, double q) {
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

std::vector<CoefficientRow> summarize_chain(const PosteriorChain& chain, double interval_mass) {
  if (chain.num_draws() == 0) throw InsufficientDrawsError("summarize_chain: empty chain");
  if (!(interval_mass > 0.0 && interval_mass < 1.0))
    throw std::invalid_argument("interval mass must lie in (0,1)");
  const Eigen::Index S = chain.beta_draws.rows(), p = chain.beta_draws.cols();
  const double alpha = (1.0 - interval_mass) / 2.0;

  std::vector<CoefficientRow> rows;
  rows.reserve(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    std::vector<double> draws(chain.beta_draws.col(j).data(),
                              chain.beta_draws.col(j).data() + S);
    Eigen::Index pos = 0, neg = 0;
    for (double d : draws) {
      if (d > 0.0) ++pos;
      else if (d < 0.0) ++neg;
    }
    CoefficientRow row;
    row.regressor = j < static_cast<Eigen::Index>(chain.regressor_names.size())
                        ? chain.regressor_names[j]
                        : "b" + std::to_string(j);
    row.tau = chain.tau;
    row.estimator = "bqr";
    row.estimate = chain.beta_draws.col(j).mean();
    row.prob = std::min(1.0, 2.0 * static_cast<double>(std::min(pos, neg)) /
                                 static_cast<double>(S));
    row.stars = stars_for_prob(row.prob);
    row.interval_lo = sorted_quantile(draws, alpha);
    row.interval_hi = sorted_quantile(draws, 1.0 - alpha);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> chain_diagnostics(const std::vector<PosteriorChain>& chains, bool split) {
  if (chains.empty()) throw InsufficientDrawsError("chain_diagnostics: no chains");
  const Eigen::Index p = chains.front().beta_draws.cols();
  for (const auto& c : chains) {
    if (c.num_draws() < 100)
      throw InsufficientDrawsError("chain_diagnostics: need >= 100 post-burn-in draws");
    if (c.beta_draws.cols() != p)
      throw std::invalid_argument("chain_diagnostics: coefficient count mismatch");
  }

  // Assemble the (possibly split) sequences per coefficient.
  std::vector<double> rhat(p, 1.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    std::vector<std::vector<double>> seqs;
    for (const auto& c : chains) {
      const Eigen::Index S = c.beta_draws.rows();
      if (split) {
        const Eigen::Index half = S / 2;
        std::vector<double> a(half), b(half);
        for (Eigen::Index i = 0; i < half; ++i) {
          a[i] = c.beta_draws(i, j);
          b[i] = c.beta_draws(S - half + i, j);
        }
        seqs.push_back(std::move(a));
        seqs.push_back(std::move(b));
      } else {
        std::vector<double> a(S);
        for (Eigen::Index i = 0; i < S; ++i) a[i] = c.beta_draws(i, j);
        seqs.push_back(std::move(a));
      }
    }
    const double m = static_cast<double>(seqs.size());
    const double L = static_cast<double>(seqs.front().size());
    std::vector<double> means;
    double W = 0.0;
    for (auto& s : seqs) {
      double mu = 0.0;
      for (double v : s) mu += v;
      mu /= L;
      means.push_back(mu);
      double var = 0.0;
      for (double v : s) var += (v - mu) * (v - mu);
      W += var / (L - 1.0);
    }
    W /= m;
    double grand = 0.0;
    for (double mu : means) grand += mu;
    grand /= m;
    double B = 0.0;
    for (double mu : means) B += (mu - grand) * (mu - grand);
    B = m > 1.0 ? L * B / (m - 1.0) : 0.0;
    if (W <= 0.0) {
      rhat[j] = 1.0;  // degenerate constant chains
      continue;
    }
    double var_plus = (L - 1.0) / L * W + B / L;
    rhat[j] = std::sqrt(var_plus / W);
  }
  return rhat;
}

}  // namespace bqr
