#include "plscore/glm.hpp"

#include <cmath>
#include <limits>

#include "plscore/error.hpp"

namespace plscore {

namespace {

MatrixXd with_intercept(const MatrixXd& z) {
  MatrixXd d(z.rows(), z.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(z.cols()) = z;
  return d;
}

VectorXd means_of(const Family& f, const VectorXd& eta) {
  return eta.unaryExpr([&](double e) { return f.inv_link(e); });
}

double total_deviance(const Family& f, const VectorXd& y, const VectorXd& w,
                      const VectorXd& means) {
  double dev = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    double m = means[i];
    f.clamp_mean(m);
    dev += w[i] * f.unit_deviance(y[i], m);
  }
  return dev;
}

bool at_boundary(const Family& f, double m) {
  switch (f.kind()) {
    case Family::Kind::binomial: return m < 1e-8 || m > 1.0 - 1e-8;
    case Family::Kind::poisson: return m < 1e-8;
    case Family::Kind::gaussian: return false;
  }
  return false;
}

}  // namespace

VectorXd linear_predictor(const VectorXd& coef, const MatrixXd& design) {
  VectorXd eta = VectorXd::Constant(design.rows(), coef[0]);
  if (design.cols() > 0) eta.noalias() += design * coef.tail(design.cols());
  return eta;
}

GlmFit fit_glm(const MatrixXd& design, const Response& y, const GlmOptions& opts) {
  const Index n = design.rows();
  const Index k = design.cols() + 1;
  const Family fam = y.family;
  if (n == 0 || y.size() != n) throw DataError("design and response sizes differ");
  if (!design.allFinite()) throw DataError("design matrix has non-finite entries");

  const MatrixXd d = with_intercept(design);
  {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(y.weights.cwiseSqrt().asDiagonal() * d);
    if (qr.rank() < k) throw NumericalError("singular IRLS system");
  }

  VectorXd means(n), eta(n);
  for (Index i = 0; i < n; ++i) {
    means[i] = fam.initial_mean(y.y[i]);
    eta[i] = fam.link(means[i]);
  }
  double dev = total_deviance(fam, y.y, y.weights, means);

  VectorXd coef = VectorXd::Zero(k);
  bool have_coef = false;
  bool converged = false;
  bool diverged = false;
  int iter = 0;
  VectorXd z(n), sw(n);
  MatrixXd wd(n, k);

  while (iter < opts.max_iter) {
    ++iter;
    for (Index i = 0; i < n; ++i) {
      const double g = fam.mean_eta(eta[i]);
      double m = means[i];
      fam.clamp_mean(m);
      z[i] = eta[i] + (y.y[i] - means[i]) / g;
      sw[i] = std::sqrt(y.weights[i] * g * g / fam.variance(m));
    }
    wd = sw.asDiagonal() * d;
    Eigen::ColPivHouseholderQR<MatrixXd> qr(wd);
    if (qr.rank() < k) {
      // Working weights collapsed (fitted means on the boundary).
      diverged = true;
      break;
    }
    VectorXd next = qr.solve(sw.cwiseProduct(z));
    VectorXd next_eta = d * next;
    VectorXd next_means = means_of(fam, next_eta);
    double next_dev = total_deviance(fam, y.y, y.weights, next_means);

    if (have_coef) {
      int halvings = 0;
      while ((!std::isfinite(next_dev) || next_dev > dev * (1.0 + 1e-12) + 1e-300) &&
             halvings < opts.max_halvings) {
        next = 0.5 * (next + coef);
        next_eta = d * next;
        next_means = means_of(fam, next_eta);
        next_dev = total_deviance(fam, y.y, y.weights, next_means);
        ++halvings;
      }
      if (!std::isfinite(next_dev) || next_dev > dev * (1.0 + 1e-12) + 1e-300) {
        diverged = true;
        break;
      }
    } else if (!std::isfinite(next_dev)) {
      diverged = true;
      break;
    }

    const double change = std::abs(next_dev - dev) / (std::abs(next_dev) + 0.1);
    coef = next;
    eta = next_eta;
    means = next_means;
    dev = next_dev;
    have_coef = true;
    if (change < opts.tolerance) {
      converged = true;
      break;
    }
  }
  if (!have_coef) throw NumericalError("singular IRLS system");

  GlmFit fit;
  fit.family = fam;
  fit.coef = coef;
  fit.n_iter = iter;
  fit.fitted_means = means;
  const auto gof = deviance_and_chi2(means, y);
  fit.deviance = gof.deviance;
  fit.pearson_chi2 = gof.pearson_chi2;

  bool boundary = false;
  for (Index i = 0; i < n; ++i) boundary = boundary || at_boundary(fam, means[i]);
  // The bound is checked on the linear predictor as well as the coefficients
  // so that separation is recognized whatever the regressor scale.
  const bool large_coef = coef.cwiseAbs().maxCoeff() > opts.separation_bound;
  const bool large_eta = eta.cwiseAbs().maxCoeff() > opts.separation_bound;
  fit.separated = (large_coef && (!converged || diverged)) ||
                  (boundary && (large_coef || large_eta));
  fit.converged = converged && !diverged && !fit.separated;

  // Covariance at the final iterate.
  VectorXd w(n);
  for (Index i = 0; i < n; ++i) {
    const double g = fam.mean_eta(eta[i]);
    double m = means[i];
    fam.clamp_mean(m);
    w[i] = y.weights[i] * g * g / fam.variance(m);
  }
  const MatrixXd info = d.transpose() * w.asDiagonal() * d;
  Eigen::LDLT<MatrixXd> ldlt(info);
  fit.cov = ldlt.solve(MatrixXd::Identity(k, k));
  if (fam.kind() == Family::Kind::gaussian) {
    const double dof = y.weights.sum() - static_cast<double>(k);
    fit.dispersion = dof > 0.0 ? fit.deviance / dof
                               : std::numeric_limits<double>::quiet_NaN();
    fit.cov *= fit.dispersion;
  }
  fit.cov = 0.5 * (fit.cov + fit.cov.transpose()).eval();
  return fit;
}

WaldResult wald_test(const GlmFit& fit, Index index) {
  WaldResult r;
  const double var = fit.cov(index, index);
  const double se = std::sqrt(var);
  if (!(se > 0.0) || !std::isfinite(se)) {
    r.degenerate = true;
    return r;
  }
  r.z = fit.coef[index] / se;
  r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  return r;
}

GoodnessOfFit deviance_and_chi2(const VectorXd& means, const Response& y) {
  GoodnessOfFit g;
  const Family& f = y.family;
  for (Index i = 0; i < y.size(); ++i) {
    double m = means[i];
    g.clamped = f.clamp_mean(m) || g.clamped;
    g.deviance += y.weights[i] * f.unit_deviance(y.y[i], m);
    const double r = y.y[i] - m;
    g.pearson_chi2 += y.weights[i] * r * r / f.variance(m);
  }
  return g;
}

GoodnessOfFit deviance_and_chi2(const GlmFit& fit, const Response& y) {
  return deviance_and_chi2(fit.fitted_means, y);
}

}  // namespace plscore
