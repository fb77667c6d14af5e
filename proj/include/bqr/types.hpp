#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---- error taxonomy ------------------------------------------------------

struct MissingColumnError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularDesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SamplerDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientDrawsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateVarianceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Manifest grammar problems are usage errors, unlike data-file ParseErrors.
struct ManifestError : ParseError {
  using ParseError::ParseError;
};

// ---- quantile level ------------------------------------------------------

// Quantile level restricted to [0.01, 0.99]; extreme quantiles are unstable
// at the sample sizes this library targets.
class QuantileLevel {
 public:
  explicit QuantileLevel(double tau) : tau_(tau) {
    if (!(tau >= 0.01 && tau <= 0.99))
      throw std::domain_error("quantile level must lie in [0.01, 0.99], got " +
                              std::to_string(tau));
  }
  double tau() const { return tau_; }

 private:
  double tau_;
};

// ---- dataset -------------------------------------------------------------

// Date-indexed numeric columns of equal length. Dates are ISO-8601 strings
// kept in strictly increasing order; all values are finite once constructed.
class Dataset {
 public:
  Dataset(std::vector<std::string> dates,
          std::vector<std::pair<std::string, std::vector<double>>> columns);

  std::size_t n() const { return dates_.size(); }
  const std::vector<std::string>& dates() const { return dates_; }
  const std::vector<std::string>& column_names() const { return names_; }
  bool has_column(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;

 private:
  std::vector<std::string> dates_;
  std::vector<std::string> names_;
  std::map<std::string, std::vector<double>> columns_;
};

// ---- model specification ---------------------------------------------

enum class TransformKind { Log, Lag, Diff };

struct Transform {
  std::string column;
  TransformKind kind;
  int lag = 1;  // used by Lag only
};

struct InstrumentBlock {
  std::string endogenous;                // must be among the regressors
  std::vector<std::string> instruments;  // extra instruments beyond exogenous + lagged response
};

struct ModelSpec {
  std::string response;
  std::vector<std::string> regressors;
  bool intercept = true;
  std::vector<Transform> transforms;
  std::optional<InstrumentBlock> instrument_block;

  void validate() const;
};

// ---- results ---------------------------------------------------------

struct PosteriorChain {
  double tau;
  Matrix beta_draws;  // S x p, post burn-in, thinned
  Vector sigma_draws; // S
  int burn_in = 0;
  int thin = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> regressor_names;  // aligned to beta_draws columns

  std::size_t num_draws() const { return static_cast<std::size_t>(beta_draws.rows()); }
};

struct CoefficientRow {
  std::string regressor;
  double tau;       // NaN for the OLS block
  std::string estimator;
  double estimate;
  double interval_lo;
  double interval_hi;
  double prob;      // two-sided tail probability in [0,1]
  int stars;        // 0..3
};

struct CoefficientTable {
  std::vector<CoefficientRow> rows;
};

struct TestResult {
  std::string name;
  double statistic;
  int df;
  double p_value;
};

// Star convention: prob < 1% -> ***, < 5% -> **, < 10% -> *.
inline int stars_for_prob(double prob) {
  if (prob < 0.01) return 3;
  if (prob < 0.05) return 2;
  if (prob < 0.10) return 1;
  return 0;
}

}  // namespace bqr
