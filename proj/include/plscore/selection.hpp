#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plscore/plsglr.hpp"

namespace plscore {

/// Fold assignment for repeated k-fold (or leave-one-out) cross-validation.
struct CvPlan {
  Index n = 0;
  int k = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  /// repeats x n fold index in [0, k).
  std::vector<std::vector<int>> fold_of;

  bool leave_one_out() const { return k == n; }
  std::vector<Index> test_rows(int repeat, int fold) const;
  std::vector<Index> train_rows(int repeat, int fold) const;
};

/// Uniform random partition per repeat with fold sizes differing by at most
/// one; k == n yields the deterministic leave-one-out plan (one repeat).
CvPlan make_folds(Index n, int k, int repeats, std::uint64_t seed);

/// One line of the criteria table. Cells that do not apply to the family
/// (or to H = 0) are empty.
struct CriteriaRow {
  int H = 0;
  std::optional<double> aic, bic;
  std::optional<double> miss_classed;
  std::optional<double> sig_pred;
  std::optional<double> miss_classed_cv;
  std::optional<double> q2chi2_cv;
  std::optional<double> press, q2, q2cum;
  std::optional<double> prechi2;
  std::optional<double> chi2_pearson;
};

struct CriteriaTable {
  Family family;
  int k = 0;
  std::vector<CriteriaRow> rows;  // H = 0..Hmax
};

/// Cross-validated quantities of one repeat, indexed by H - 1.
struct RepeatRecord {
  int repeat = 0;
  int skipped_folds = 0;
  std::vector<double> press, prechi2, miss_classed, q2, q2cum, q2chi2;
};

/// In-sample quantities of the all-data fits, indexed by H = 0..Hmax.
struct InSampleCriteria {
  std::vector<double> deviance, rss, chi2_pearson, aic, bic, miss_classed;
  std::vector<int> sig_pred;  // entry 0 unused
};

struct CvResult {
  Family family;
  int Hmax = 0;
  int k = 0;
  InSampleCriteria in_sample;
  std::vector<RepeatRecord> records;
  CriteriaTable table;
  int skipped_folds = 0;
};

/// Training fit of one fold. Standardization, components and the final GLM
/// see training rows only.
PlsGlrFit fit_fold(const MaskedMatrix& x, const Response& y, int Hmax, const CvPlan& plan,
                   int repeat, int fold);

/// All-data criteria for H = 0..Hmax plus cross-validated criteria for every
/// repeat of the plan. The reported table uses the first repeat.
CvResult cv_criteria(const MaskedMatrix& x, const Response& y, int Hmax, const CvPlan& plan);

/// Q^2 retention threshold, 1 - 0.95^2.
inline constexpr double kQ2Threshold = 0.0975;

enum class SelectionRule { cv_missclassed, q2_threshold, q2chi2_threshold, aic, bic, sig_pred };

SelectionRule parse_rule(std::string_view name);
std::string_view rule_name(SelectionRule rule);

struct VoteDistribution {
  std::vector<int> counts;     // indexed by H = 0..Hmax
  std::vector<double> freq;    // counts / total
};

struct Selection {
  int H_star = 0;
  VoteDistribution votes;
  std::vector<int> picks;  // per repeat
};

/// Applies `rule` to every repeat, tallies the picks and returns the modal
/// choice (ties broken towards fewer components).
Selection select_components(const CvResult& cv, SelectionRule rule);

}  // namespace plscore
