#include "plscore/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plscore/error.hpp"

namespace plscore {

namespace {

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

constexpr double kEtaFloor = std::numeric_limits<double>::epsilon();

}  // namespace

Family Family::parse(std::string_view name) {
  if (name == "gaussian") return Family(Kind::gaussian);
  if (name == "binomial") return Family(Kind::binomial);
  if (name == "poisson") return Family(Kind::poisson);
  throw ConfigError("unknown family '" + std::string(name) + "'");
}

std::string_view Family::name() const {
  switch (kind_) {
    case Kind::gaussian: return "gaussian";
    case Kind::binomial: return "binomial";
    case Kind::poisson: return "poisson";
  }
  return "gaussian";
}

double Family::link(double mean) const {
  switch (kind_) {
    case Kind::gaussian: return mean;
    case Kind::binomial: return std::log(mean / (1.0 - mean));
    case Kind::poisson: return std::log(mean);
  }
  return mean;
}

double Family::inv_link(double eta) const {
  switch (kind_) {
    case Kind::gaussian: return eta;
    case Kind::binomial:
      if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
      else {
        const double e = std::exp(eta);
        return e / (1.0 + e);
      }
    case Kind::poisson: return std::exp(eta);
  }
  return eta;
}

double Family::mean_eta(double eta) const {
  switch (kind_) {
    case Kind::gaussian: return 1.0;
    case Kind::binomial: {
      const double e = std::exp(-std::abs(eta));
      return std::max(e / ((1.0 + e) * (1.0 + e)), kEtaFloor);
    }
    case Kind::poisson: return std::max(std::exp(eta), kEtaFloor);
  }
  return 1.0;
}

double Family::variance(double mean) const {
  switch (kind_) {
    case Kind::gaussian: return 1.0;
    case Kind::binomial: return mean * (1.0 - mean);
    case Kind::poisson: return mean;
  }
  return 1.0;
}

double Family::unit_deviance(double y, double mean) const {
  switch (kind_) {
    case Kind::gaussian: return (y - mean) * (y - mean);
    case Kind::binomial: {
      const double d =
          2.0 * (xlogy(y, y / mean) + xlogy(1.0 - y, (1.0 - y) / (1.0 - mean)));
      return std::max(d, 0.0);
    }
    case Kind::poisson:
      return std::max(2.0 * (xlogy(y, y / mean) - (y - mean)), 0.0);
  }
  return 0.0;
}

double Family::pearson_resid(double y, double mean) const {
  return (y - mean) / std::sqrt(variance(mean));
}

bool Family::clamp_mean(double& mean) const {
  switch (kind_) {
    case Kind::gaussian: return false;
    case Kind::binomial: {
      const double c = std::clamp(mean, kMeanEpsilon, 1.0 - kMeanEpsilon);
      const bool changed = c != mean;
      mean = c;
      return changed;
    }
    case Kind::poisson: {
      const bool changed = mean < kMeanEpsilon;
      if (changed) mean = kMeanEpsilon;
      return changed;
    }
  }
  return false;
}

double Family::initial_mean(double y) const {
  switch (kind_) {
    case Kind::gaussian: return y;
    case Kind::binomial: return (y + 0.5) / 2.0;
    case Kind::poisson: return y + 0.1;
  }
  return y;
}

bool Family::valid_response(double y) const {
  if (!std::isfinite(y)) return false;
  switch (kind_) {
    case Kind::gaussian: return true;
    case Kind::binomial: return y == 0.0 || y == 1.0;
    case Kind::poisson: return y >= 0.0 && std::floor(y) == y;
  }
  return false;
}

}  // namespace plscore
