#pragma once

#include <span>

namespace plscore {

double normal_cdf(double x);
/// Standard normal quantile; p must lie in (0, 1).
double normal_quantile(double p);

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
double quantile_type7(std::span<const double> sorted, double prob);

}  // namespace plscore
