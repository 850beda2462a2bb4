#ifndef CEVRP_STATS_HPP
#define CEVRP_STATS_HPP

#include <span>

namespace cevrp::stats {

double mean(std::span<const double> xs);

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> xs);

/// Two-sided standard normal tail probability for a z statistic.
double normal_two_sided_p(double z);

/// Survival function of the chi-squared distribution with df degrees of
/// freedom (upper regularized incomplete gamma).
double chi_squared_sf(double x, int df);

}  // namespace cevrp::stats

#endif
