#pragma once

#include <set>
#include <string>

#include "bqr/bayes.hpp"
#include "bqr/inference.hpp"
#include "bqr/types.hpp"

namespace bqr {

enum class Estimator { Ols, Qr, Bqr, Tsls, Bqr2sls };

struct StudyConfig {
  std::vector<double> tau_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::set<Estimator> estimators = {Estimator::Ols, Estimator::Bqr};
  BqrPrior prior;
  McmcConfig mcmc;
  BootstrapConfig bootstrap;
  double interval_mass = 0.90;
  // Slope-equality pairs (tau, 1-tau) tested for each regressor when the
  // bootstrap tests are requested.
  std::vector<std::pair<double, double>> slope_pairs = {{0.1, 0.9}, {0.25, 0.75}};
  bool run_slope_tests = true;
  std::uint64_t seed = 20150101;
};

struct StudyResult {
  CoefficientTable table;
  std::vector<TestResult> tests;
};

// Fits the OLS block once and the requested quantile estimators over the
// grid, then the slope-equality tests. Per-quantile seeds derive from the
// bundle seed, so results do not depend on scheduling.
StudyResult run_study(const Dataset& dataset, const ModelSpec& spec, const StudyConfig& cfg);

enum class ReportFormat { Text, Csv, Markdown };

// Rows grouped by regressor and ordered by quantile, columns
// Quantile / Coefficient / Prob. / stars; byte-stable for identical inputs.
std::string render_report(const CoefficientTable& table, const std::vector<TestResult>& tests,
                          ReportFormat format);

}  // namespace bqr
