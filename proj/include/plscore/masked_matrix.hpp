#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plscore/family.hpp"

namespace plscore {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Presence mask: true where a value was observed.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// n x p predictor matrix with an explicit missingness mask. Masked cells of
/// `values` hold NaN and must never be read.
struct MaskedMatrix {
  MatrixXd values;
  Mask mask;
  std::vector<std::string> col_names;
  std::vector<std::string> row_ids;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
  bool present(Index i, Index j) const { return mask(i, j); }
  bool complete() const { return mask.all(); }
  Index missing_count() const { return mask.size() - mask.count(); }

  /// Wraps a fully observed matrix, generating default names.
  static MaskedMatrix dense(const MatrixXd& values);
  /// Builds from values plus mask; masked cells are overwritten with NaN.
  static MaskedMatrix from_mask(MatrixXd values, Mask mask);
};

std::vector<std::string> default_col_names(Index p);
std::vector<std::string> default_row_ids(Index n);

/// Checks the dataset invariants: every row has a present entry, every
/// column has at least two present entries taking two distinct values.
/// Throws DataError naming the offending row or column.
void validate(const MaskedMatrix& x);
/// Non-throwing variant of validate().
bool satisfies_invariants(const MaskedMatrix& x);

/// Row subset; indices may repeat (bootstrap resamples).
MaskedMatrix subset_rows(const MaskedMatrix& x, std::span<const Index> rows);

/// Fully observed response with its family and positive observation weights.
struct Response {
  VectorXd y;
  Family family;
  VectorXd weights;

  Index size() const { return y.size(); }

  static Response make(VectorXd y, Family family);
  static Response make(VectorXd y, Family family, VectorXd weights);
};

/// Throws DataError on a response outside the family's domain or on
/// non-positive weights.
void validate(const Response& r);
Response subset_rows(const Response& r, std::span<const Index> rows);

struct ScalingRecord {
  VectorXd col_means;
  VectorXd col_sds;
  double y_mean = 0.0;
  double y_sd = 1.0;
};

/// Column standardization over present entries. Weights act as frequency
/// weights: mean = sum(w x)/sum(w), var = sum(w (x-mean)^2)/(sum(w) - 1),
/// which reduces to the sample sd (divisor n_j - 1) for unit weights.
std::pair<MaskedMatrix, ScalingRecord> standardize(const MaskedMatrix& x);
std::pair<MaskedMatrix, ScalingRecord> standardize(const MaskedMatrix& x,
                                                   const VectorXd& weights);

/// Applies a previously computed scaling (training statistics) to new rows.
MaskedMatrix apply_scaling(const MaskedMatrix& x, const ScalingRecord& rec);

}  // namespace plscore
