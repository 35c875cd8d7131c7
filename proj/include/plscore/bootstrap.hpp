#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plscore/plsglr.hpp"
#include "plscore/selection.hpp"

namespace plscore {

enum class BootScheme { yt, yx };
enum class CiType { percentile, basic, normal, bca };

BootScheme parse_scheme(std::string_view name);
std::string_view scheme_name(BootScheme s);
CiType parse_ci_type(std::string_view name);
std::string_view ci_type_name(CiType t);
inline constexpr CiType kAllCiTypes[] = {CiType::percentile, CiType::basic, CiType::normal,
                                         CiType::bca};

/// Bootstrap draws of the raw-scale predictor slopes, B x p.
struct BootDraws {
  MatrixXd beta_star;
  int skipped = 0;   // resamples rejected and redrawn
  int attempts = 0;  // total resamples drawn
};

/// Redraw budget: at most this many attempts per requested resample.
inline constexpr int kRedrawFactor = 10;

/// (Y,T) refit on given row indices: the final GLM is refit on
/// (y[idx], T[idx]) with the component weights frozen. Returns nullopt when
/// the GLM fails or separates.
std::optional<VectorXd> refit_yt(const PlsGlrFit& fit, const Response& y,
                                 std::span<const Index> rows);

/// (Y,X) refit: the whole pipeline on rows idx with H components.
std::optional<VectorXd> refit_yx(const MaskedMatrix& x, const Response& y, int H,
                                 std::span<const Index> rows);

/// Resample b draws from its own stream keyed by (seed, b); rejected
/// resamples are redrawn from the same stream. Throws
/// NumericalError("bootstrap instability") when the total number of
/// attempts exceeds kRedrawFactor * B.
BootDraws boot_yt(const PlsGlrFit& fit, const Response& y, int B, std::uint64_t seed);
BootDraws boot_yx(const MaskedMatrix& x, const Response& y, int H, int B,
                  std::uint64_t seed);

/// Leave-one-out coefficient vectors (n x p) for the BCa acceleration.
/// Failed leave-one-out fits are dropped.
MatrixXd jackknife_yt(const PlsGlrFit& fit, const Response& y);
MatrixXd jackknife_yx(const MaskedMatrix& x, const Response& y, int H);

struct CiResult {
  MatrixXd bounds;                // p x 2, lower then upper
  std::vector<bool> degenerate;   // all draws identical
  std::vector<bool> z0_clamped;   // BCa bias correction hit 0 or B
  VectorXd acceleration;          // BCa only
};

/// Confidence intervals at level 1 - alpha. BCa requires leave-one-out
/// values; quantiles use type-7 interpolation.
CiResult ci(const MatrixXd& beta_star, const VectorXd& beta_hat, double alpha, CiType type,
            const MatrixXd* jackknife = nullptr);

/// 0 lies outside the closed interval.
bool excludes_zero(double lo, double hi);

struct BootOptions {
  BootScheme scheme = BootScheme::yt;
  int B = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  CiType ci_type = CiType::bca;
};

struct BootReport {
  BootScheme scheme = BootScheme::yt;
  int B = 0;
  int H = 0;
  double alpha = 0.05;
  CiType ci_type = CiType::bca;
  std::vector<std::string> names;
  VectorXd beta_hat;  // raw-scale slopes of the original fit
  MatrixXd beta_star;
  int skipped = 0;
  std::map<CiType, CiResult> ci;
  std::vector<bool> significant;  // under ci_type
  VectorXd jackknife_accel;
};

/// Fits H components, bootstraps under the chosen scheme and derives all
/// four interval types. The jackknife runs only for BCa.
BootReport bootstrap(const MaskedMatrix& x, const Response& y, int H, const BootOptions& opts);

struct StabilityTable {
  std::vector<std::string> names;
  std::vector<int> H;                          // 1..Hmax
  std::vector<bool> available;                 // bootstrap ran for this H
  std::vector<std::vector<bool>> significant;  // per H, per predictor
  std::vector<double> weight;                  // q(H) from the votes
  VectorXd pi_e;
};

/// Significance of every predictor across H = 1..Hmax and the CV-weighted
/// index pi_e_j = sum_H q(H) sig_j(H). H values with zero vote are
/// bootstrapped too unless `voted_only`; their failures only mark the row
/// unavailable.
StabilityTable stability_and_pie(const MaskedMatrix& x, const Response& y, int Hmax,
                                 const VoteDistribution& votes, const BootOptions& opts,
                                 bool voted_only = false);

}  // namespace plscore
