#include "bqr/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace bqr::stats {

double student_t_two_sided_p(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

double chi_squared_sf(double x, double df) {
  if (df <= 0.0) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, x < 0.0 ? 0.0 : x));
}

double normal_quantile(double p) {
  boost::math::normal dist;
  return boost::math::quantile(dist, p);
}

double normal_cdf(double x) {
  boost::math::normal dist;
  return boost::math::cdf(dist, x);
}

}  // namespace bqr::stats
