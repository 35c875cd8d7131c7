#include "plscore/pls.hpp"

#include <algorithm>

#include "plscore/error.hpp"
#include "plscore/nipals.hpp"

namespace plscore {

int max_components(Index n, Index p) {
  return static_cast<int>(std::min<Index>(n - 1, p));
}

PlsFit fit_pls(const MaskedMatrix& x, const Response& y, int H) {
  return fit_pls(x, y, H, y.weights);
}

PlsFit fit_pls(const MaskedMatrix& x, const Response& y, int H,
               const VectorXd& obs_weights) {
  const Index n = x.rows(), p = x.cols();
  if (y.family.kind() != Family::Kind::gaussian)
    throw ConfigError("fit_pls requires a gaussian response");
  if (y.size() != n || obs_weights.size() != n)
    throw DataError("predictor and response row counts differ");
  if (H < 1 || H > max_components(n, p))
    throw ConfigError("component count " + std::to_string(H) +
                      " outside [1, min(n-1, p)]");

  auto [xres, scaling] = standardize(x, obs_weights);
  const double wsum = obs_weights.sum();
  scaling.y_mean = obs_weights.dot(y.y) / wsum;
  VectorXd u = y.y.array() - scaling.y_mean;
  scaling.y_sd = std::sqrt(obs_weights.dot(u.cwiseProduct(u)) / (wsum - 1.0));

  PlsFit fit;
  fit.family = y.family;
  fit.H = H;
  fit.col_names = x.col_names;
  fit.scaling = scaling;
  fit.mu = scaling.y_mean;
  fit.W.resize(p, H);
  fit.P.resize(p, H);
  fit.T.resize(n, H);
  fit.c.resize(H);

  for (int h = 0; h < H; ++h) {
    VectorXd w;
    try {
      w = nipals_weights(xres, u, obs_weights);
    } catch (const DegenerateComponent&) {
      throw DegenerateComponent("degenerate component", h);
    }
    orient_weights(w);
    const VectorXd t = compute_scores(xres, w);
    const double tt = obs_weights.dot(t.cwiseProduct(t));
    if (!(tt >= kDegenerateTolerance)) throw DegenerateComponent("degenerate component", h);
    fit.c[h] = obs_weights.dot(u.cwiseProduct(t)) / tt;
    fit.P.col(h) = deflate_inplace(xres.values, xres.mask, t, obs_weights);
    u -= fit.c[h] * t;
    fit.W.col(h) = w;
    fit.T.col(h) = t;
  }
  fit.fitted = (fit.T * fit.c).array() + fit.mu;
  finish_coefficients(fit);
  return fit;
}

void finish_coefficients(PlsFit& fit) {
  const MatrixXd ptw = fit.P.transpose() * fit.W;
  Eigen::FullPivLU<MatrixXd> lu(ptw);
  if (!lu.isInvertible() || lu.rcond() < 1e-12)
    throw NumericalError("deflation collapse");
  fit.W_star = fit.W * lu.inverse();
  fit.beta_std = fit.W_star * fit.c;
  const Index p = fit.beta_std.size();
  fit.beta_raw.resize(p + 1);
  fit.beta_raw.tail(p) = fit.beta_std.cwiseQuotient(fit.scaling.col_sds);
  fit.beta_raw[0] = fit.mu - fit.beta_raw.tail(p).dot(fit.scaling.col_means);
}

MatrixXd project_scores(const PlsFit& fit, const MaskedMatrix& xnew) {
  if (xnew.cols() != fit.n_predictors() ||
      (!xnew.col_names.empty() && !fit.col_names.empty() && xnew.col_names != fit.col_names))
    throw DataError("new data columns do not match the training columns");
  for (Index i = 0; i < xnew.rows(); ++i)
    if (!xnew.mask.row(i).any())
      throw DataError("row " + std::to_string(i + 1) + " has no present predictor");
  MaskedMatrix xres = apply_scaling(xnew, fit.scaling);
  MatrixXd t(xnew.rows(), fit.H);
  for (int h = 0; h < fit.H; ++h) {
    t.col(h) = compute_scores(xres, VectorXd(fit.W.col(h)));
    for (Index j = 0; j < xres.cols(); ++j)
      for (Index i = 0; i < xres.rows(); ++i)
        if (xres.mask(i, j)) xres.values(i, j) -= t(i, h) * fit.P(j, h);
  }
  return t;
}

VectorXd predict(const PlsFit& fit, const MaskedMatrix& xnew) {
  return (project_scores(fit, xnew) * fit.c).array() + fit.mu;
}

PlsFit leading_components(const PlsFit& fit, int h) {
  if (h < 1 || h > fit.H) throw ConfigError("leading component count out of range");
  PlsFit out = fit;
  out.H = h;
  out.W = fit.W.leftCols(h);
  out.P = fit.P.leftCols(h);
  out.T = fit.T.leftCols(h);
  out.c = fit.c.head(h);
  out.fitted = (out.T * out.c).array() + out.mu;
  finish_coefficients(out);
  return out;
}

}  // namespace plscore
