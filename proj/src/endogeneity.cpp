#include <algorithm>
#include <cmath>

#include "bqr/endogeneity.hpp"
#include "bqr/stats.hpp"

namespace bqr {

InstrumentSet build_instruments(const Dataset& dataset, const ModelSpec& spec) {
  spec.validate();
  if (!spec.instrument_block)
    throw std::invalid_argument("build_instruments: spec has no instrument block");
  const auto& block = *spec.instrument_block;
  const std::size_t n = dataset.n();
  if (n < 2) throw DegenerateSampleError("build_instruments: need at least two rows");

  std::vector<std::string> names;
  std::vector<const std::vector<double>*> cols;
  if (spec.intercept) names.push_back("const");
  for (const auto& r : spec.regressors) {
    if (r == block.endogenous) continue;
    cols.push_back(&dataset.column(r));
    names.push_back(r);
  }
  const auto& resp = dataset.column(spec.response);
  std::vector<Eigen::Index> excluded;

  const std::size_t rows = n - 1;  // one row lost to the response lag
  const std::size_t q = names.size() + 1 + block.instruments.size();
  if (rows <= q)
    throw DegenerateSampleError("build_instruments: sample too small for " +
                                std::to_string(q) + " instruments");

  InstrumentSet out;
  out.Z.resize(rows, q);
  std::size_t col = 0;
  if (spec.intercept) out.Z.col(col++).setOnes();
  for (const auto* s : cols) {
    for (std::size_t i = 0; i < rows; ++i) out.Z(i, col) = (*s)[i + 1];
    ++col;
  }
  // Lag-1 response is an excluded instrument: it appears in Z, not in X.
  for (std::size_t i = 0; i < rows; ++i) out.Z(i, col) = resp[i];
  excluded.push_back(static_cast<Eigen::Index>(col));
  names.insert(names.begin() + col, spec.response + "_lag");
  ++col;
  for (const auto& inst : block.instruments) {
    const auto& s = dataset.column(inst);
    for (std::size_t i = 0; i < rows; ++i) out.Z(i, col) = s[i + 1];
    excluded.push_back(static_cast<Eigen::Index>(col));
    names.push_back(inst);
    ++col;
  }
  out.names = std::move(names);
  out.excluded = std::move(excluded);
  return out;
}

TestResult sargan_test(const Vector& residuals, const Matrix& Z, Eigen::Index n_params) {
  const Eigen::Index n = Z.rows(), q = Z.cols();
  if (residuals.size() != n)
    throw std::invalid_argument("sargan_test: residual length does not match Z");
  const int df = static_cast<int>(q - n_params);
  if (df <= 0) return {"sargan", 0.0, 0, 1.0};

  // Uncentered R^2: e'P_Z e / e'e.
  Eigen::LDLT<Matrix> ldlt(Matrix(Z.transpose() * Z));
  Vector zte = Z.transpose() * residuals;
  double explained = zte.dot(ldlt.solve(zte));
  double total = residuals.squaredNorm();
  double stat = total > 0.0 ? static_cast<double>(n) * explained / total : 0.0;
  stat = std::max(stat, 0.0);
  return {"sargan", stat, df, stats::chi_squared_sf(stat, df)};
}

double weak_id_F(const Matrix& Z, const Vector& endogenous,
                 const std::vector<Eigen::Index>& excluded_instruments) {
  if (excluded_instruments.empty())
    throw std::invalid_argument("weak_id_F: need at least one excluded instrument");
  const Eigen::Index n = Z.rows(), q = Z.cols();
  const Eigen::Index m = static_cast<Eigen::Index>(excluded_instruments.size());

  OlsResult unrestricted = ols_fit(Z, endogenous);

  Matrix Zr(n, q - m);
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < q; ++j) {
    if (std::find(excluded_instruments.begin(), excluded_instruments.end(), j) !=
        excluded_instruments.end())
      continue;
    Zr.col(col++) = Z.col(j);
  }
  double rss_r;
  if (Zr.cols() == 0) {
    rss_r = endogenous.squaredNorm();
  } else {
    OlsResult restricted = ols_fit(Zr, endogenous);
    rss_r = restricted.rss;
  }
  double denom = unrestricted.rss / static_cast<double>(n - q);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return (rss_r - unrestricted.rss) / static_cast<double>(m) / denom;
}

TslsResult tsls_fit(const Matrix& X, const Vector& y, Eigen::Index endogenous_index,
                    const Matrix& Z, const std::vector<Eigen::Index>& excluded_instruments) {
  const Eigen::Index n = X.rows(), p = X.cols(), q = Z.cols();
  if (Z.rows() != n) throw std::invalid_argument("tsls_fit: Z row count does not match X");
  if (q < p) throw SingularDesignError("tsls_fit: under-identified (q < p)");
  if (endogenous_index < 0 || endogenous_index >= p)
    throw std::invalid_argument("tsls_fit: endogenous index out of range");

  TslsResult r;
  r.first_stage = ols_fit(Z, X.col(endogenous_index));
  r.fitted_endogenous = Z * r.first_stage.coefficients;

  Matrix Xhat = X;
  Xhat.col(endogenous_index) = r.fitted_endogenous;
  OlsResult stage2 = ols_fit(Xhat, y);
  r.coefficients = stage2.coefficients;
  r.std_errors = stage2.std_errors;
  r.p_values = stage2.p_values;

  // Structural residuals use the original endogenous column.
  r.residuals = y - X * r.coefficients;
  r.sargan = sargan_test(r.residuals, Z, p);
  if (!excluded_instruments.empty()) {
    r.weak_id_F = weak_id_F(Z, X.col(endogenous_index), excluded_instruments);
    r.weak_id_pass = *r.weak_id_F > kWeakIdCriticalValue;
  }
  return r;
}

PosteriorChain bqr_2sls(const Matrix& X, const Vector& y, Eigen::Index endogenous_index,
                        const Matrix& Z, const QuantileLevel& tau, const BqrPrior& prior,
                        const McmcConfig& cfg, const std::vector<std::string>& names) {
  if (Z.rows() != X.rows()) throw std::invalid_argument("bqr_2sls: Z row count does not match X");
  if (endogenous_index < 0 || endogenous_index >= X.cols())
    throw std::invalid_argument("bqr_2sls: endogenous index out of range");
  OlsResult first = ols_fit(Z, X.col(endogenous_index));
  Matrix Xhat = X;
  Xhat.col(endogenous_index) = Z * first.coefficients;
  return bqr_fit(Xhat, y, tau, prior, cfg, names);
}

}  // namespace bqr
