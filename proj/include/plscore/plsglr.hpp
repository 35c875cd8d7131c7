#pragma once

#include <string>
#include <vector>

#include "plscore/glm.hpp"
#include "plscore/pls.hpp"

namespace plscore {

/// PLS generalized linear regression fit: the PLS decomposition plus the
/// GLM of y on the components (mu and c are that GLM's coefficients).
struct PlsGlrFit : PlsFit {
  GlmFit final_glm;
  /// Per component step, predictors whose Wald p-value fell below 0.05.
  std::vector<int> sig_pred_count;
  /// Per-predictor GLMs that failed to converge and contributed 0.
  int failed_step_glms = 0;
};

struct ComponentStep {
  VectorXd w;
  VectorXd t;
  int sig_count = 0;
  int failed = 0;
};

inline constexpr double kSignificanceLevel = 0.05;

/// One component of the PLSGLR construction. For each predictor j the GLM
/// of y on (previous components, residual x_j) is fit on the rows where x_j
/// is present; the coefficient of x_j, multiplied by the weighted sum of
/// squares of x_j over those rows, becomes the unnormalized weight. The
/// factor makes the gaussian family reproduce the NIPALS weights exactly.
ComponentStep plsglr_component_step(const MaskedMatrix& xres, const MatrixXd& t_prev,
                                    const Response& y);

/// Extracts H components (each followed by a gaussian-loading deflation of
/// the predictor residuals) and fits the final GLM on them.
PlsGlrFit fit_plsglr(const MaskedMatrix& x, const Response& y, int H);

/// The h-component model nested in a larger fit: leading components with the
/// final GLM refit on them. Identical to fit_plsglr(x, y, h).
PlsGlrFit nested_model(const PlsGlrFit& fit, const Response& y, int h);

/// Rebuilds mu, c and the back-transformed coefficients from a new final GLM
/// on the same component scores.
void attach_final_glm(PlsGlrFit& fit, GlmFit glm);

enum class PredictType { link, response, klass };

VectorXd predict_response(const PlsGlrFit& fit, const MaskedMatrix& xnew, PredictType type);

struct BiplotData {
  MatrixXd scores;    // n x 2
  MatrixXd loadings;  // p x 2
  std::vector<std::string> row_ids;
  std::vector<std::string> col_names;
};

BiplotData biplot_data(const PlsGlrFit& fit, const std::vector<std::string>& row_ids = {});

}  // namespace plscore
