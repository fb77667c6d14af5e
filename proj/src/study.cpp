#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "bqr/design.hpp"
#include "bqr/endogeneity.hpp"
#include "bqr/rng.hpp"
#include "bqr/study.hpp"

namespace bqr {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string star_string(int stars) { return std::string(stars, '*'); }

CoefficientRow ols_row(const std::string& name, double est, double lo, double hi, double p,
                       const char* estimator) {
  return {name, std::nan(""), estimator, est, lo, hi, p, stars_for_prob(p)};
}

}  // namespace

StudyResult run_study(const Dataset& dataset, const ModelSpec& spec, const StudyConfig& cfg) {
  spec.validate();
  StudyResult out;

  const bool wants_iv = cfg.estimators.count(Estimator::Tsls) ||
                        cfg.estimators.count(Estimator::Bqr2sls);
  if (wants_iv && !spec.instrument_block)
    throw std::invalid_argument("run_study: 2SLS estimators need an instrument block");

  Design d = build_design(dataset, spec);

  // 2SLS shares the instrument sample: one leading row trimmed for the lag.
  Matrix X_iv;
  Vector y_iv;
  InstrumentSet iv;
  Eigen::Index endog_idx = -1;
  if (wants_iv) {
    iv = build_instruments(dataset, spec);
    X_iv = d.X.bottomRows(iv.Z.rows());
    y_iv = d.y.tail(iv.Z.rows());
    auto it = std::find(d.names.begin(), d.names.end(), spec.instrument_block->endogenous);
    endog_idx = it - d.names.begin();
  }

  // OLS block.
  if (cfg.estimators.count(Estimator::Ols)) {
    OlsResult ols = ols_fit(d.X, d.y);
    for (Eigen::Index j = 0; j < ols.coefficients.size(); ++j) {
      double half = 1.6448536269514722 * ols.std_errors(j);  // 90% normal interval
      out.table.rows.push_back(ols_row(d.names[j], ols.coefficients(j),
                                       ols.coefficients(j) - half, ols.coefficients(j) + half,
                                       ols.p_values(j), "ols"));
    }
  }
  if (cfg.estimators.count(Estimator::Tsls)) {
    TslsResult t = tsls_fit(X_iv, y_iv, endog_idx, iv.Z, iv.excluded);
    for (Eigen::Index j = 0; j < t.coefficients.size(); ++j) {
      double half = 1.6448536269514722 * t.std_errors(j);
      out.table.rows.push_back(ols_row(d.names[j], t.coefficients(j), t.coefficients(j) - half,
                                       t.coefficients(j) + half, t.p_values(j), "tsls"));
    }
    out.tests.push_back(t.sargan);
    if (t.weak_id_F)
      out.tests.push_back({"stock-yogo weak identification F", *t.weak_id_F, 0,
                           t.weak_id_pass ? 0.0 : 1.0});
  }

  // Per-quantile fits with seeds derived from the bundle seed by grid index.
  for (std::size_t t = 0; t < cfg.tau_grid.size(); ++t) {
    QuantileLevel tau(cfg.tau_grid[t]);
    if (cfg.estimators.count(Estimator::Qr)) {
      QrResult qr = qr_fit(d.X, d.y, tau);
      for (Eigen::Index j = 0; j < qr.coefficients.size(); ++j)
        out.table.rows.push_back({d.names[j], tau.tau(), "qr", qr.coefficients(j),
                                  qr.coefficients(j), qr.coefficients(j), 1.0, 0});
    }
    if (cfg.estimators.count(Estimator::Bqr)) {
      McmcConfig mc = cfg.mcmc;
      mc.seed = derive_seed(cfg.seed, 1000 + t);
      PosteriorChain chain = bqr_fit(d.X, d.y, tau, cfg.prior, mc, d.names);
      auto rows = summarize_chain(chain, cfg.interval_mass);
      out.table.rows.insert(out.table.rows.end(), rows.begin(), rows.end());
    }
    if (cfg.estimators.count(Estimator::Bqr2sls)) {
      McmcConfig mc = cfg.mcmc;
      mc.seed = derive_seed(cfg.seed, 2000 + t);
      PosteriorChain chain =
          bqr_2sls(X_iv, y_iv, endog_idx, iv.Z, tau, cfg.prior, mc, d.names);
      auto rows = summarize_chain(chain, cfg.interval_mass);
      for (auto& r : rows) r.estimator = "bqr-2sls";
      out.table.rows.insert(out.table.rows.end(), rows.begin(), rows.end());
    }
  }

  if (cfg.run_slope_tests) {
    const Eigen::Index first_slope = spec.intercept ? 1 : 0;
    std::size_t pair_idx = 0;
    for (const auto& [lo, hi] : cfg.slope_pairs) {
      for (Eigen::Index j = first_slope; j < static_cast<Eigen::Index>(d.names.size()); ++j) {
        BootstrapConfig bc = cfg.bootstrap;
        bc.seed = derive_seed(cfg.seed, 3000 + pair_idx);
        TestResult tr =
            slope_equality_test(d.X, d.y, QuantileLevel(lo), QuantileLevel(hi), j, bc);
        tr.name = "slope-equality (bootstrap Wald) " + d.names[j] + " tau=" + fmt(lo, "%.2g") +
                  " vs " + fmt(hi, "%.2g");
        out.tests.push_back(tr);
        ++pair_idx;
      }
    }
  }
  return out;
}

namespace {

struct RowKey {
  std::string estimator;
  std::string regressor;
};

std::string render_rows(const CoefficientTable& table, const std::vector<TestResult>& tests,
                        ReportFormat format) {
  std::ostringstream os;
  const bool csv = format == ReportFormat::Csv;
  const bool md = format == ReportFormat::Markdown;

  // OLS-style blocks first (tau = NaN), then quantile rows grouped by
  // regressor in first-appearance order.
  std::vector<std::string> reg_order;
  for (const auto& r : table.rows)
    if (std::find(reg_order.begin(), reg_order.end(), r.regressor) == reg_order.end())
      reg_order.push_back(r.regressor);
  std::vector<std::string> est_order;
  for (const auto& r : table.rows)
    if (std::find(est_order.begin(), est_order.end(), r.estimator) == est_order.end())
      est_order.push_back(r.estimator);

  if (csv) {
    os << "estimator,regressor,quantile,coefficient,interval_lo,interval_hi,prob,stars\n";
    for (const auto& est : est_order)
      for (const auto& reg : reg_order)
        for (const auto& r : table.rows) {
          if (r.estimator != est || r.regressor != reg) continue;
          os << r.estimator << "," << r.regressor << ","
             << (std::isnan(r.tau) ? "" : fmt(r.tau, "%.2f")) << "," << fmt(r.estimate) << ","
             << fmt(r.interval_lo) << "," << fmt(r.interval_hi) << "," << fmt(r.prob) << ","
             << star_string(r.stars) << "\n";
        }
    for (const auto& t : tests)
      os << "test," << t.name << ",," << fmt(t.statistic) << ",,," << fmt(t.p_value) << ","
         << star_string(stars_for_prob(t.p_value)) << "\n";
    return os.str();
  }

  auto line = [&](const std::string& a, const std::string& b, const std::string& c,
                  const std::string& dd, const std::string& e) {
    if (md) {
      os << "| " << a << " | " << b << " | " << c << " | " << dd << " | " << e << " |\n";
    } else {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%-14s %10s %14s %10s %-4s\n", a.c_str(), b.c_str(),
                    c.c_str(), dd.c_str(), e.c_str());
      os << buf;
    }
  };

  for (const auto& est : est_order) {
    os << (md ? "\n### " : "\n== ") << est << (md ? "\n\n" : " ==\n");
    line("Regressor", "Quantile", "Coefficient", "Prob.", "");
    if (md) os << "| --- | --- | --- | --- | --- |\n";
    for (const auto& reg : reg_order)
      for (const auto& r : table.rows) {
        if (r.estimator != est || r.regressor != reg) continue;
        line(r.regressor, std::isnan(r.tau) ? "-" : fmt(r.tau, "%.2f"), fmt(r.estimate),
             fmt(r.prob, "%.4f"), star_string(r.stars));
      }
  }
  if (!tests.empty()) {
    os << (md ? "\n### tests\n\n" : "\n== tests ==\n");
    if (md) os << "| Test | Statistic | df | p-value |  |\n| --- | --- | --- | --- | --- |\n";
    for (const auto& t : tests)
      line(t.name, fmt(t.statistic), std::to_string(t.df), fmt(t.p_value, "%.4f"),
           star_string(stars_for_prob(t.p_value)));
  }
  return os.str();
}

}  // namespace

std::string render_report(const CoefficientTable& table, const std::vector<TestResult>& tests,
                          ReportFormat format) {
  if (table.rows.empty()) throw std::invalid_argument("render_report: empty table");
  return render_rows(table, tests, format);
}

}  // namespace bqr
