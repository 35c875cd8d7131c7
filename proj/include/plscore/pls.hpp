#pragma once

#include <string>
#include <vector>

#include "plscore/masked_matrix.hpp"

namespace plscore {

/// Fitted PLS model. Component quantities live on the standardized scale;
/// `beta_raw` maps raw predictors to the linear predictor.
struct PlsFit {
  MatrixXd W;       // p x H unit-norm weights
  MatrixXd P;       // p x H loadings
  MatrixXd T;       // n x H scores
  MatrixXd W_star;  // W (P'W)^-1
  VectorXd c;       // component coefficients
  double mu = 0.0;  // intercept
  VectorXd beta_std;
  VectorXd beta_raw;  // intercept first, then p slopes
  ScalingRecord scaling;
  int H = 0;
  Family family;
  std::vector<std::string> col_names;
  /// In-sample fitted values on the linear-predictor scale: mu + T c.
  VectorXd fitted;

  Index n_predictors() const { return W.rows(); }
  VectorXd slopes() const { return beta_raw.tail(beta_raw.size() - 1); }
};

/// Largest admissible component count, min(n - 1, p).
int max_components(Index n, Index p);

/// Regular (unit weights) or weighted PLS1 regression by missing-data aware
/// NIPALS. Observation weights default to y.weights.
PlsFit fit_pls(const MaskedMatrix& x, const Response& y, int H);
PlsFit fit_pls(const MaskedMatrix& x, const Response& y, int H,
               const VectorXd& obs_weights);

/// Scores of new rows: standardize with the training record, then extract
/// the H components sequentially with the training weights and loadings.
MatrixXd project_scores(const PlsFit& fit, const MaskedMatrix& xnew);

/// mu + T_new c.
VectorXd predict(const PlsFit& fit, const MaskedMatrix& xnew);

/// Fills W_star, beta_std and beta_raw from W, P, c, mu and the scaling.
/// Throws NumericalError("deflation collapse") when P'W is singular.
void finish_coefficients(PlsFit& fit);

/// The first `h` components of a fit; c and mu are kept as given.
PlsFit leading_components(const PlsFit& fit, int h);

}  // namespace plscore
