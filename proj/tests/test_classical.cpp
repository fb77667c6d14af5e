#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bqr/classical.hpp"
#include "bqr/rng.hpp"
#include "oracles.hpp"

using namespace bqr;

namespace {

// y = 1 + 2x through (0,1), (1,3), (2,5).
std::pair<Matrix, Vector> exact_line() {
  Matrix X(3, 2);
  X << 1, 0, 1, 1, 1, 2;
  Vector y(3);
  y << 1, 3, 5;
  return {X, y};
}

}  // namespace

TEST_CASE("check loss values") {
  CHECK(check_loss(QuantileLevel(0.5), 2.0) == doctest::Approx(1.0));
  CHECK(check_loss(QuantileLevel(0.9), -1.0) == doctest::Approx(0.1));
  CHECK(check_loss(QuantileLevel(0.3), 0.0) == 0.0);
}

TEST_CASE("pinball identities") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    double tau = rng.uniform(0.01, 0.99);
    double u = rng.normal(0, 3);
    // Reflection: rho_tau(u) = rho_{1-tau}(-u).
    CHECK(check_loss(QuantileLevel(tau), u) ==
          doctest::Approx(check_loss(QuantileLevel(1.0 - tau), -u)).epsilon(1e-12));
    // Absolute-value decomposition: rho_tau(u) + rho_tau(-u) = |u|.
    double lhs = check_loss(QuantileLevel(tau), u) + check_loss(QuantileLevel(tau), -u);
    CHECK(lhs == doctest::Approx(std::fabs(u)).epsilon(1e-12));
  }
}

TEST_CASE("ols exact line") {
  auto [X, y] = exact_line();
  auto r = ols_fit(X, y);
  CHECK(r.coefficients(0) == doctest::Approx(1.0));
  CHECK(r.coefficients(1) == doctest::Approx(2.0));
  CHECK(r.residuals.norm() == doctest::Approx(0.0));
}

TEST_CASE("ols constant response") {
  Matrix X(5, 2);
  X << 1, 0.3, 1, -1.2, 1, 2.0, 1, 0.7, 1, -0.5;
  Vector y = Vector::Constant(5, 4.0);
  auto r = ols_fit(X, y);
  CHECK(r.coefficients(0) == doctest::Approx(4.0));
  CHECK(r.coefficients(1) == doctest::Approx(0.0));
}

TEST_CASE("ols matches explicit normal-equations oracle") {
  Rng rng(42);
  Matrix X(20, 3);
  Vector y(20);
  for (int i = 0; i < 20; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal();
    X(i, 2) = rng.normal();
    y(i) = rng.normal(1.0, 2.0);
  }
  Vector b = (X.transpose() * X).inverse() * X.transpose() * y;  // explicit inversion
  auto r = ols_fit(X, y);
  CHECK((r.coefficients - b).norm() < 1e-8);
  // Orthogonality X're = 0, relative to the response scale.
  CHECK((X.transpose() * r.residuals).norm() < 1e-8 * y.norm());
  for (int j = 0; j < 3; ++j) {
    CHECK(r.p_values(j) >= 0.0);
    CHECK(r.p_values(j) <= 1.0);
  }
}

TEST_CASE("ols rejects rank-deficient designs") {
  Matrix X(4, 2);
  X << 1, 2, 1, 2, 1, 2, 1, 2;
  Vector y(4);
  y << 1, 2, 3, 4;
  CHECK_THROWS_AS(ols_fit(X, y), SingularDesignError);
}

TEST_CASE("qr_fit intercept-only median and low quantile") {
  Matrix X = Matrix::Ones(3, 1);
  Vector y(3);
  y << 1, 2, 9;
  auto med = qr_fit(X, y, QuantileLevel(0.5));
  CHECK(med.coefficients(0) == doctest::Approx(2.0));

  auto low = qr_fit(X, y, QuantileLevel(0.1));
  // grid-search oracle confirms the objective at the minimizer
  double oracle_obj = oracle::intercept_objective_min(0.1, {1, 2, 9});
  CHECK(low.objective == doctest::Approx(oracle_obj).epsilon(1e-10));
  CHECK(low.coefficients(0) == doctest::Approx(1.0));
}

TEST_CASE("qr_fit exact line gives zero objective at any tau") {
  auto [X, y] = exact_line();
  for (double tau : {0.1, 0.37, 0.5, 0.9}) {
    auto r = qr_fit(X, y, QuantileLevel(tau));
    CHECK(r.coefficients(0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.coefficients(1) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("qr_fit objective field equals check-loss sum at coefficients") {
  Rng rng(3);
  Matrix X(30, 2);
  Vector y(30);
  for (int i = 0; i < 30; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.uniform(0, 2);
    y(i) = 0.5 + X(i, 1) + rng.normal();
  }
  auto r = qr_fit(X, y, QuantileLevel(0.3));
  CHECK(r.objective ==
        doctest::Approx(check_loss_sum(QuantileLevel(0.3), y - X * r.coefficients))
            .epsilon(1e-10));
  CHECK(r.converged);
}

TEST_CASE("qr_fit scale equivariance") {
  Rng rng(11);
  Matrix X(40, 2);
  Vector y(40);
  for (int i = 0; i < 40; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal();
    y(i) = 1.0 - 0.7 * X(i, 1) + rng.laplace(1.0);
  }
  const double c = 3.5;
  auto a = qr_fit(X, y, QuantileLevel(0.25));
  auto b = qr_fit(X, Vector(c * y), QuantileLevel(0.25));
  CHECK((b.coefficients - c * a.coefficients).norm() < 1e-6 * c * a.coefficients.norm());
  CHECK(b.objective == doctest::Approx(c * a.objective).epsilon(1e-6));
}

TEST_CASE("qr_fit regressor-shift equivariance with intercept") {
  Rng rng(13);
  Matrix X(50, 2);
  Vector y(50);
  for (int i = 0; i < 50; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal();
    y(i) = 0.2 + 1.4 * X(i, 1) + rng.normal();
  }
  auto base = qr_fit(X, y, QuantileLevel(0.6));
  const double shift = 2.5;
  Matrix Xs = X;
  Xs.col(1).array() += shift;
  auto shifted = qr_fit(Xs, y, QuantileLevel(0.6));
  CHECK(shifted.coefficients(1) == doctest::Approx(base.coefficients(1)).epsilon(1e-6));
  CHECK(shifted.coefficients(0) ==
        doctest::Approx(base.coefficients(0) - shift * base.coefficients(1)).epsilon(1e-6));
}

TEST_CASE("median qr dominates the OLS coefficients in L1") {
  Rng rng(17);
  Matrix X(60, 3);
  Vector y(60);
  for (int i = 0; i < 60; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal();
    X(i, 2) = rng.uniform(0, 1);
    y(i) = X(i, 1) - X(i, 2) + rng.normal(0, 2);
  }
  auto qr = qr_fit(X, y, QuantileLevel(0.5));
  auto ols = ols_fit(X, y);
  double l1_ols = check_loss_sum(QuantileLevel(0.5), y - X * ols.coefficients);
  CHECK(qr.objective <= l1_ols + 1e-12);
}

TEST_CASE("intercept-only equivalence across taus against grid search") {
  Rng rng(23);
  Matrix X = Matrix::Ones(17, 1);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> yv(17);
    Vector y(17);
    for (int i = 0; i < 17; ++i) {
      yv[i] = rng.normal(0, 5);
      y(i) = yv[i];
    }
    for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      auto r = qr_fit(X, y, QuantileLevel(tau));
      CHECK(r.objective ==
            doctest::Approx(oracle::intercept_objective_min(tau, yv)).epsilon(1e-9));
    }
  }
}
