#pragma once

namespace bqr::stats {

// Thin wrappers around boost::math; keeps <boost/...> out of public headers.
double student_t_two_sided_p(double t, double df);
double chi_squared_sf(double x, double df);  // upper tail
double normal_quantile(double p);
double normal_cdf(double x);

}  // namespace bqr::stats
