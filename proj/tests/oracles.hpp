#pragma once

// Independent oracles used by the test suites. Nothing here may call into
// the implementation paths it checks.

#include <cmath>
#include <functional>
#include <vector>

#include "bqr/types.hpp"

namespace oracle {

// Check loss written out independently.
inline double pinball(double tau, double u) { return u < 0.0 ? u * (tau - 1.0) : u * tau; }

// 1-D minimization of the intercept-only check-loss objective. The optimum
// is attained at a sample point, so scanning the sample values is exact.
inline double intercept_objective_min(double tau, const std::vector<double>& y) {
  double best = std::numeric_limits<double>::infinity();
  for (double b : y) {
    double obj = 0.0;
    for (double yi : y) obj += pinball(tau, yi - b);
    best = std::min(best, obj);
  }
  return best;
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
  struct Impl {
    const std::function<double(double)>& f;
    double run(double a, double b, double fa, double fm, double fb, double whole, double tol,
               int depth) {
      double m = 0.5 * (a + b);
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return run(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
             run(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
  } impl{f};
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return impl.run(a, b, fa, fm, fb, whole, tol, depth);
}

// Integral of the ASL density exp(log[tau(1-tau)/sigma] - pinball/sigma),
// split at the kink.
inline double asl_density_integral(double tau, double sigma) {
  auto dens = [&](double u) {
    return tau * (1.0 - tau) / sigma * std::exp(-pinball(tau, u) / sigma);
  };
  // Piecewise-exponential tails decay with rates (1-tau)/sigma and tau/sigma.
  double left = 60.0 * sigma / (1.0 - tau);
  double right = 60.0 * sigma / tau;
  return adaptive_simpson(dens, -left, 0.0, 1e-10) + adaptive_simpson(dens, 0.0, right, 1e-10);
}

// Marginal density of the normal-given-exponential mixture at u, via the
// substitution z = t*t which removes the z^{-1/2} endpoint singularity.
inline double mixture_marginal_density(double u, double theta, double psi2, double sigma) {
  auto integrand = [&](double t) {
    double z = t * t;
    if (z <= 0.0) return 0.0;
    double var = psi2 * sigma * z;
    double d = u - theta * z;
    double normal = std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
    double expz = std::exp(-z / sigma) / sigma;
    return 2.0 * t * normal * expz;
  };
  // z ranges far enough that exp(-z/sigma) underflows. The integrand is
  // sharply peaked, so integrate over a geometric panel grid instead of one
  // interval - a single adaptive pass can step over the peak entirely.
  double tmax = std::sqrt(100.0 * sigma + 20.0 * std::fabs(u));
  double total = 0.0;
  double lo = 0.0;
  double hi = tmax * 1e-8;
  while (lo < tmax) {
    total += oracle::adaptive_simpson(integrand, lo, std::min(hi, tmax), 1e-13);
    lo = hi;
    hi *= 2.0;
  }
  return total;
}

// Closed-form IV estimate for exactly identified systems.
inline bqr::Vector iv_closed_form(const bqr::Matrix& Z, const bqr::Matrix& X,
                                  const bqr::Vector& y) {
  return (Z.transpose() * X).fullPivLu().solve(Z.transpose() * y);
}

}  // namespace oracle
