#pragma once

#include "plscore/masked_matrix.hpp"

namespace plscore {

struct GlmOptions {
  double tolerance = 1e-8;  // relative deviance change
  int max_iter = 50;
  int max_halvings = 10;
  /// Separation: |coef| beyond this bound after a convergence failure, or
  /// fitted means on the boundary with |coef| or |eta| beyond it.
  double separation_bound = 30.0;
};

/// Result of an IRLS fit. Coefficients are ordered intercept first.
struct GlmFit {
  VectorXd coef;
  MatrixXd cov;
  double deviance = 0.0;
  double pearson_chi2 = 0.0;
  double dispersion = 1.0;
  int n_iter = 0;
  bool converged = false;
  /// Coefficients diverging towards a boundary fit (complete separation).
  bool separated = false;
  VectorXd fitted_means;
  Family family;

  Index n_params() const { return coef.size(); }
};

/// Fits y on an intercept plus the columns of `design` (complete, may have
/// zero columns) by iteratively reweighted least squares with step halving.
/// Throws NumericalError("singular IRLS system") for a rank-deficient design.
GlmFit fit_glm(const MatrixXd& design, const Response& y, const GlmOptions& opts = {});

/// Linear predictor intercept + design * slopes for given coefficients.
VectorXd linear_predictor(const VectorXd& coef, const MatrixXd& design);

struct WaldResult {
  double z = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // standard error zero or undefined
};

/// Two-sided Wald test of coefficient `index` (0 = intercept).
WaldResult wald_test(const GlmFit& fit, Index index);

struct GoodnessOfFit {
  double deviance = 0.0;
  double pearson_chi2 = 0.0;
  bool clamped = false;  // some mean sat on the boundary of its range
};

/// Weighted deviance and Pearson statistic of `means` against `y`.
GoodnessOfFit deviance_and_chi2(const VectorXd& means, const Response& y);
GoodnessOfFit deviance_and_chi2(const GlmFit& fit, const Response& y);

}  // namespace plscore
