#include "plscore/plsglr.hpp"

#include "plscore/error.hpp"
#include "plscore/nipals.hpp"
#include "plscore/parallel.hpp"

namespace plscore {

ComponentStep plsglr_component_step(const MaskedMatrix& xres, const MatrixXd& t_prev,
                                    const Response& y) {
  const Index n = xres.rows(), p = xres.cols(), k = t_prev.cols();
  VectorXd a = VectorXd::Zero(p);
  std::vector<char> significant(p, 0), failed(p, 0);

  parallel_for(p, [&](std::ptrdiff_t j) {
    std::vector<Index> rows;
    rows.reserve(n);
    for (Index i = 0; i < n; ++i)
      if (xres.mask(i, j)) rows.push_back(i);
    const auto m = static_cast<Index>(rows.size());
    MatrixXd z(m, k + 1);
    double ss = 0.0;
    for (Index r = 0; r < m; ++r) {
      const Index i = rows[r];
      z.row(r).head(k) = t_prev.row(i);
      z(r, k) = xres.values(i, j);
      ss += y.weights[i] * z(r, k) * z(r, k);
    }
    const Response sub = subset_rows(y, rows);
    try {
      const GlmFit g = fit_glm(z, sub);
      if (!g.converged) {
        failed[j] = 1;
        return;
      }
      a[j] = g.coef[k + 1] * ss;
      const auto wt = wald_test(g, k + 1);
      significant[j] = !wt.degenerate && wt.p_value < kSignificanceLevel;
    } catch (const NumericalError&) {
      failed[j] = 1;
    } catch (const DataError&) {
      failed[j] = 1;
    }
  });

  ComponentStep step;
  for (Index j = 0; j < p; ++j) {
    step.sig_count += significant[j];
    step.failed += failed[j];
  }
  const double norm = a.norm();
  if (!(norm >= kDegenerateTolerance))
    throw DegenerateComponent("degenerate PLSGLR component", static_cast<int>(k));
  step.w = a / norm;
  orient_weights(step.w);
  step.t = compute_scores(xres, step.w);
  return step;
}

void attach_final_glm(PlsGlrFit& fit, GlmFit glm) {
  fit.final_glm = std::move(glm);
  fit.mu = fit.final_glm.coef[0];
  fit.c = fit.final_glm.coef.tail(fit.H);
  fit.fitted = linear_predictor(fit.final_glm.coef, fit.T);
  finish_coefficients(fit);
}

PlsGlrFit fit_plsglr(const MaskedMatrix& x, const Response& y, int H) {
  const Index n = x.rows(), p = x.cols();
  if (y.size() != n) throw DataError("predictor and response row counts differ");
  if (H < 1 || H > max_components(n, p))
    throw ConfigError("component count " + std::to_string(H) +
                      " outside [1, min(n-1, p)]");

  auto [xres, scaling] = standardize(x, y.weights);
  PlsGlrFit fit;
  fit.family = y.family;
  fit.H = H;
  fit.col_names = x.col_names;
  fit.scaling = scaling;
  fit.W.resize(p, H);
  fit.P.resize(p, H);
  fit.T.resize(n, H);

  for (int h = 0; h < H; ++h) {
    ComponentStep step;
    try {
      step = plsglr_component_step(xres, fit.T.leftCols(h), y);
    } catch (const DegenerateComponent&) {
      throw DegenerateComponent("degenerate PLSGLR component", h);
    }
    const double tt = y.weights.dot(step.t.cwiseProduct(step.t));
    if (!(tt >= kDegenerateTolerance))
      throw DegenerateComponent("degenerate PLSGLR component", h);
    fit.P.col(h) = deflate_inplace(xres.values, xres.mask, step.t, y.weights);
    fit.W.col(h) = step.w;
    fit.T.col(h) = step.t;
    fit.sig_pred_count.push_back(step.sig_count);
    fit.failed_step_glms += step.failed;
  }
  attach_final_glm(fit, fit_glm(fit.T, y));
  return fit;
}

PlsGlrFit nested_model(const PlsGlrFit& fit, const Response& y, int h) {
  if (h < 1 || h > fit.H) throw ConfigError("nested component count out of range");
  PlsGlrFit out = fit;
  out.H = h;
  out.W = fit.W.leftCols(h);
  out.P = fit.P.leftCols(h);
  out.T = fit.T.leftCols(h);
  out.sig_pred_count.resize(h);
  attach_final_glm(out, fit_glm(out.T, y));
  return out;
}

VectorXd predict_response(const PlsGlrFit& fit, const MaskedMatrix& xnew,
                          PredictType type) {
  if (type == PredictType::klass && fit.family.kind() != Family::Kind::binomial)
    throw ConfigError("class predictions require a binomial family");
  VectorXd eta = linear_predictor(fit.final_glm.coef, project_scores(fit, xnew));
  if (type == PredictType::link) return eta;
  VectorXd m = eta.unaryExpr([&](double e) { return fit.family.inv_link(e); });
  if (type == PredictType::response) return m;
  return m.unaryExpr([](double v) { return v >= 0.5 ? 1.0 : 0.0; });
}

BiplotData biplot_data(const PlsGlrFit& fit, const std::vector<std::string>& row_ids) {
  if (fit.H < 2) throw ConfigError("biplot needs at least 2 components");
  BiplotData b;
  b.scores = fit.T.leftCols(2);
  b.loadings = fit.P.leftCols(2);
  b.col_names = fit.col_names;
  b.row_ids = row_ids.empty() ? default_row_ids(fit.T.rows()) : row_ids;
  return b;
}

}  // namespace plscore
