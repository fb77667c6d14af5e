#pragma once

#include <optional>

#include "bqr/bayes.hpp"
#include "bqr/classical.hpp"
#include "bqr/types.hpp"

namespace bqr {

// Stock-Yogo critical value for one endogenous regressor, one excluded
// instrument, 10% maximal IV size.
inline constexpr double kWeakIdCriticalValue = 16.38;

struct TslsResult {
  Vector coefficients;
  Vector std_errors;  // from the substituted design; approximate
  Vector p_values;
  OlsResult first_stage;
  Vector fitted_endogenous;
  Vector residuals;  // structural: y - X b with the original endogenous column
  TestResult sargan;
  std::optional<double> weak_id_F;
  bool weak_id_pass = false;
};

struct InstrumentSet {
  Matrix Z;
  std::vector<std::string> names;
  std::vector<Eigen::Index> excluded;  // columns of Z not appearing in X
};

// Z = [intercept] + exogenous regressors + lag-1 response + declared extra
// instruments; one leading row is trimmed for the lag. The aligned design
// rows are what the caller must pair it with.
InstrumentSet build_instruments(const Dataset& dataset, const ModelSpec& spec);

// Two-stage least squares by substitution: stage 1 regresses the endogenous
// column on Z, stage 2 regresses y on X with that column replaced by the
// stage-1 fitted values. Sargan and the first-stage excluded-instrument F
// statistic are filled in.
TslsResult tsls_fit(const Matrix& X, const Vector& y, Eigen::Index endogenous_index,
                    const Matrix& Z, const std::vector<Eigen::Index>& excluded_instruments = {});

// Stage 1 by OLS, then bqr_fit on the fitted-value design at tau.
PosteriorChain bqr_2sls(const Matrix& X, const Vector& y, Eigen::Index endogenous_index,
                        const Matrix& Z, const QuantileLevel& tau, const BqrPrior& prior,
                        const McmcConfig& cfg, const std::vector<std::string>& names = {});

// n R^2 of the structural residuals on Z; chi-squared with q - p degrees of
// freedom. Exactly identified models report statistic 0, p-value 1.
TestResult sargan_test(const Vector& residuals, const Matrix& Z, Eigen::Index n_params);

// Joint F statistic for the excluded instruments in the first stage.
double weak_id_F(const Matrix& Z, const Vector& endogenous,
                 const std::vector<Eigen::Index>& excluded_instruments);

}  // namespace bqr
