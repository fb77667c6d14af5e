#include <cmath>

#include "bqr/dgp.hpp"
#include "bqr/rng.hpp"
#include "bqr/stats.hpp"

namespace bqr {

void DgpConfig::validate() const {
  if (n < 50) throw std::invalid_argument("DGP requires n >= 50");
  if (kind == DgpKind::Simultaneous && !(std::fabs(rho) < 1.0))
    throw std::invalid_argument("simultaneous DGP requires |rho| < 1");
  if (kind == DgpKind::LocationScale) {
    if (beta.size() == 0) throw std::invalid_argument("location-scale DGP requires beta");
    if (gamma.size() != beta.size())
      throw std::invalid_argument("beta and gamma must have equal length");
  }
}

double noise_quantile(NoiseKind kind, double tau) {
  if (kind == NoiseKind::Normal) return stats::normal_quantile(tau);
  // Laplace with unit variance: scale b = 1/sqrt(2).
  const double b = 1.0 / std::sqrt(2.0);
  return tau < 0.5 ? b * std::log(2.0 * tau) : -b * std::log(2.0 * (1.0 - tau));
}

double SimulatedData::quantile_coefficient(Eigen::Index j, double tau) const {
  if (kind != DgpKind::LocationScale)
    throw std::logic_error("quantile coefficients are defined for the location-scale kind");
  return truth_beta(j) + truth_gamma(j) * noise_quantile(noise, tau);
}

namespace {

// Synthetic daily calendar starting 2000-01-01; only ordering matters.
std::vector<std::string> synthetic_dates(int n) {
  std::vector<std::string> dates;
  dates.reserve(n);
  int y = 2000, m = 1, d = 1;
  auto days_in = [](int yy, int mm) {
    static const int t[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (mm == 2 && (yy % 4 == 0 && (yy % 100 != 0 || yy % 400 == 0))) return 29;
    return t[mm - 1];
  };
  char buf[32];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y % 10000, m % 100, d % 100);
    dates.emplace_back(buf);
    if (++d > days_in(y, m)) {
      d = 1;
      if (++m > 12) {
        m = 1;
        ++y;
      }
    }
  }
  return dates;
}

SimulatedData simulate_location_scale(const DgpConfig& cfg) {
  const Eigen::Index p = cfg.beta.size();
  Rng rng(cfg.seed);

  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix X(cfg.n, p);
    X.col(0).setOnes();
    for (int i = 0; i < cfg.n; ++i)
      for (Eigen::Index j = 1; j < p; ++j) X(i, j) = rng.uniform(0.5, 1.5);
    Vector scale = X * cfg.gamma;
    if ((scale.array() <= 0.0).any()) continue;  // reject, redraw

    Vector y(cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
      double e = cfg.noise == NoiseKind::Normal ? rng.normal()
                                                : rng.laplace(1.0 / std::sqrt(2.0));
      y(i) = X.row(i).dot(cfg.beta) + scale(i) * e;
    }
    std::vector<std::pair<std::string, std::vector<double>>> cols;
    cols.emplace_back("y", std::vector<double>(y.data(), y.data() + cfg.n));
    for (Eigen::Index j = 1; j < p; ++j) {
      std::vector<double> c(cfg.n);
      for (int i = 0; i < cfg.n; ++i) c[i] = X(i, j);
      cols.emplace_back("x" + std::to_string(j), std::move(c));
    }
    return {Dataset(synthetic_dates(cfg.n), std::move(cols)), cfg.beta, cfg.gamma, cfg.kind,
            cfg.noise};
  }
  throw std::invalid_argument("location-scale DGP: x'gamma > 0 unattainable after 100 attempts");
}

SimulatedData simulate_simultaneous(const DgpConfig& cfg) {
  Rng rng(cfg.seed);
  const double b0 = cfg.beta.size() > 0 ? cfg.beta(0) : 0.0;
  const double b1 = cfg.beta.size() > 1 ? cfg.beta(1) : 1.0;

  std::vector<double> y(cfg.n), x(cfg.n), w(cfg.n);
  const double s = std::sqrt(1.0 - cfg.rho * cfg.rho);
  for (int i = 0; i < cfg.n; ++i) {
    double v = rng.normal();
    double u = cfg.rho * v + s * rng.normal();  // corr(u, v) = rho
    w[i] = rng.normal();
    x[i] = 0.5 + w[i] + v;
    y[i] = b0 + b1 * x[i] + u;
  }
  std::vector<std::pair<std::string, std::vector<double>>> cols;
  cols.emplace_back("y", std::move(y));
  cols.emplace_back("x", std::move(x));
  cols.emplace_back("w", std::move(w));
  Vector beta(2);
  beta << b0, b1;
  return {Dataset(synthetic_dates(cfg.n), std::move(cols)), beta, Vector::Zero(2), cfg.kind,
          cfg.noise};
}

}  // namespace

SimulatedData simulate_dgp(const DgpConfig& cfg) {
  cfg.validate();
  return cfg.kind == DgpKind::LocationScale ? simulate_location_scale(cfg)
                                            : simulate_simultaneous(cfg);
}

}  // namespace bqr
