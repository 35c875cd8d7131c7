#pragma once

#include <string>
#include <string_view>

namespace plscore {

/// Response family with its canonical link: gaussian/identity,
/// binomial/logit, poisson/log.
class Family {
 public:
  enum class Kind { gaussian, binomial, poisson };

  constexpr Family() = default;
  constexpr explicit Family(Kind kind) : kind_(kind) {}

  static Family parse(std::string_view name);  // throws ConfigError

  constexpr Kind kind() const { return kind_; }
  std::string_view name() const;

  double link(double mean) const;
  double inv_link(double eta) const;
  /// d mean / d eta evaluated at eta.
  double mean_eta(double eta) const;
  double variance(double mean) const;
  double unit_deviance(double y, double mean) const;
  double pearson_resid(double y, double mean) const;

  /// Clamps a mean into the open valid range used for variance and
  /// deviance evaluation. Returns true if clamping happened.
  bool clamp_mean(double& mean) const;
  /// Starting mean for IRLS.
  double initial_mean(double y) const;
  bool valid_response(double y) const;

  friend constexpr bool operator==(Family a, Family b) {
    return a.kind_ == b.kind_;
  }

 private:
  Kind kind_ = Kind::gaussian;
};

inline constexpr double kMeanEpsilon = 1e-10;

}  // namespace plscore
