#include "plscore/stats.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "plscore/error.hpp"

namespace plscore {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw NumericalError("normal quantile outside (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double quantile_type7(std::span<const double> sorted, double prob) {
  const auto n = sorted.size();
  if (n == 0) throw NumericalError("quantile of an empty sample");
  const double h = (static_cast<double>(n) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace plscore
