#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bqr/classical.hpp"
#include "bqr/stats.hpp"

namespace bqr {

double check_loss_sum(const QuantileLevel& tau, const Vector& residuals) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i) s += check_loss(tau, residuals(i));
  return s;
}

namespace {

// Rank check via column-pivoted QR; Eigen's default threshold.
void require_full_rank(const Matrix& X, const char* who) {
  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  if (qr.rank() < X.cols())
    throw SingularDesignError(std::string(who) + ": design matrix is rank deficient (rank " +
                              std::to_string(qr.rank()) + " of " + std::to_string(X.cols()) + ")");
}

}  // namespace

OlsResult ols_fit(const Matrix& X, const Vector& y) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (n <= p) throw DegenerateSampleError("ols_fit: need n > p");
  require_full_rank(X, "ols_fit");

  Matrix xtx = X.transpose() * X;
  Eigen::LLT<Matrix> llt(xtx);
  if (llt.info() != Eigen::Success) throw SingularDesignError("ols_fit: X'X not positive definite");

  OlsResult r;
  r.coefficients = llt.solve(X.transpose() * y);
  r.residuals = y - X * r.coefficients;
  r.rss = r.residuals.squaredNorm();
  r.sigma2_hat = r.rss / static_cast<double>(n - p);

  Matrix xtx_inv = llt.solve(Matrix::Identity(p, p));
  r.std_errors.resize(p);
  r.t_stats.resize(p);
  r.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    r.std_errors(j) = std::sqrt(r.sigma2_hat * xtx_inv(j, j));
    r.t_stats(j) = r.std_errors(j) > 0.0 ? r.coefficients(j) / r.std_errors(j) : 0.0;
    r.p_values(j) = stats::student_t_two_sided_p(r.t_stats(j), static_cast<double>(n - p));
  }
  return r;
}

namespace {

// One weighted-least-squares step of the Hunter-Lange majorizer at the
// current residuals r: solve X'WX b = X'(W y + (2 tau - 1) 1) with
// w_i = 1 / (eps + |r_i|).
Vector mm_step(const Matrix& X, const Vector& y, const Vector& resid, double tau, double eps) {
  const Eigen::Index n = X.rows(), p = X.cols();
  Matrix xtwx = Matrix::Zero(p, p);
  Vector rhs = Vector::Zero(p);
  const double shift = 2.0 * tau - 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double w = 1.0 / (eps + std::fabs(resid(i)));
    xtwx.noalias() += w * (X.row(i).transpose() * X.row(i));
    rhs += X.row(i).transpose() * (w * y(i) + shift);
  }
  Eigen::LDLT<Matrix> ldlt(xtwx);
  if (ldlt.info() != Eigen::Success)
    throw SingularDesignError("qr_fit: singular weighted system");
  return ldlt.solve(rhs);
}

// The check-loss optimum sits at a vertex where p residuals vanish. Solve
// the exact-fit system through the p observations with the smallest current
// residuals and keep it if it lowers the objective.
void vertex_polish(const Matrix& X, const Vector& y, const QuantileLevel& tau, Vector& beta,
                   double& objective) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (n < p) return;
  Vector resid = y - X * beta;
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + p, idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::fabs(resid(a)) < std::fabs(resid(b));
  });
  Matrix Xb(p, p);
  Vector yb(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    Xb.row(j) = X.row(idx[j]);
    yb(j) = y(idx[j]);
  }
  Eigen::FullPivLU<Matrix> lu(Xb);
  if (!lu.isInvertible()) return;
  Vector cand = lu.solve(yb);
  double obj = check_loss_sum(tau, y - X * cand);
  if (obj < objective) {
    beta = std::move(cand);
    objective = obj;
  }
}

}  // namespace

QrResult qr_fit(const Matrix& X, const Vector& y, const QuantileLevel& tau, int max_iterations) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (n <= p) throw DegenerateSampleError("qr_fit: need n > p");
  require_full_rank(X, "qr_fit");

  QrResult r;
  r.tau = tau.tau();

  // Start from least squares.
  Vector beta = Eigen::LDLT<Matrix>(Matrix(X.transpose() * X)).solve(X.transpose() * y);
  Vector resid = y - X * beta;
  double obj = check_loss_sum(tau, resid);

  int iter = 0;
  bool converged = false;
  for (int stage = 0; stage <= 4; ++stage) {
    const double eps = 1e-2 * std::pow(10.0, -stage);
    // Coarse smoothing stages only need a rough solution; the tight
    // tolerance is reserved for the final stage.
    const double rel_tol = stage == 4 ? 1e-10 : 1e-7;
    for (;;) {
      if (iter >= max_iterations) break;
      ++iter;
      Vector beta_new = mm_step(X, y, resid, tau.tau(), eps);
      Vector resid_new = y - X * beta_new;
      double obj_new = check_loss_sum(tau, resid_new);
      bool improved = obj_new < obj;
      if (improved) {
        beta = std::move(beta_new);
        resid = std::move(resid_new);
      }
      double denom = std::max(1.0, std::fabs(obj));
      double gain = improved ? (obj - obj_new) / denom : 0.0;
      if (improved) obj = obj_new;
      if (gain < rel_tol) break;  // stage converged
    }
    if (iter >= max_iterations) break;
    if (stage == 4) converged = true;
  }

  vertex_polish(X, y, tau, beta, obj);

  r.coefficients = std::move(beta);
  r.objective = obj;
  r.iterations = iter;
  r.converged = converged;
  return r;
}

}  // namespace bqr
