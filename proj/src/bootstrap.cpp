#include "plscore/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plscore/error.hpp"
#include "plscore/parallel.hpp"
#include "plscore/rng.hpp"
#include "plscore/stats.hpp"

namespace plscore {

BootScheme parse_scheme(std::string_view name) {
  if (name == "yt") return BootScheme::yt;
  if (name == "yx") return BootScheme::yx;
  throw ConfigError("unknown bootstrap scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(BootScheme s) { return s == BootScheme::yt ? "yt" : "yx"; }

CiType parse_ci_type(std::string_view name) {
  if (name == "percentile") return CiType::percentile;
  if (name == "basic") return CiType::basic;
  if (name == "normal") return CiType::normal;
  if (name == "bca") return CiType::bca;
  throw ConfigError("unknown interval type '" + std::string(name) + "'");
}

std::string_view ci_type_name(CiType t) {
  switch (t) {
    case CiType::percentile: return "percentile";
    case CiType::basic: return "basic";
    case CiType::normal: return "normal";
    case CiType::bca: return "bca";
  }
  return "percentile";
}

namespace {

VectorXd raw_slopes(const PlsGlrFit& fit, const VectorXd& c) {
  return (fit.W_star * c).cwiseQuotient(fit.scaling.col_sds);
}

template <class Refit>
BootDraws run_resamples(Index n, Index p, int B, std::uint64_t seed, Refit&& refit) {
  if (B < 1) throw ConfigError("bootstrap needs B >= 1");
  BootDraws out;
  out.beta_star.resize(B, p);
  std::vector<int> attempts(B, 0);
  const long budget = static_cast<long>(kRedrawFactor) * B;

  parallel_for(B, [&](std::ptrdiff_t b) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(b)});
    std::uniform_int_distribution<Index> draw(0, n - 1);
    std::vector<Index> rows(n);
    while (attempts[b] < budget) {
      ++attempts[b];
      for (auto& r : rows) r = draw(rng);
      if (auto beta = refit(std::span<const Index>(rows))) {
        out.beta_star.row(b) = beta->transpose();
        return;
      }
    }
    throw NumericalError("bootstrap instability: resample " + std::to_string(b) +
                         " exhausted the redraw budget");
  });

  out.attempts = std::accumulate(attempts.begin(), attempts.end(), 0);
  out.skipped = out.attempts - B;
  if (out.attempts > budget)
    throw NumericalError("bootstrap instability: " + std::to_string(out.skipped) +
                         " resamples rejected");
  return out;
}

}  // namespace

std::optional<VectorXd> refit_yt(const PlsGlrFit& fit, const Response& y,
                                 std::span<const Index> rows) {
  MatrixXd t(rows.size(), fit.H);
  for (std::size_t r = 0; r < rows.size(); ++r) t.row(r) = fit.T.row(rows[r]);
  try {
    const GlmFit g = fit_glm(t, subset_rows(y, rows));
    if (!g.converged) return std::nullopt;
    return raw_slopes(fit, g.coef.tail(fit.H));
  } catch (const NumericalError&) {
    return std::nullopt;
  } catch (const DataError&) {
    return std::nullopt;
  }
}

std::optional<VectorXd> refit_yx(const MaskedMatrix& x, const Response& y, int H,
                                 std::span<const Index> rows) {
  const MaskedMatrix xs = subset_rows(x, rows);
  if (!satisfies_invariants(xs)) return std::nullopt;
  try {
    const PlsGlrFit fit = fit_plsglr(xs, subset_rows(y, rows), H);
    if (!fit.final_glm.converged) return std::nullopt;
    return fit.slopes();
  } catch (const NumericalError&) {
    return std::nullopt;
  } catch (const DataError&) {
    return std::nullopt;
  }
}

BootDraws boot_yt(const PlsGlrFit& fit, const Response& y, int B, std::uint64_t seed) {
  return run_resamples(fit.T.rows(), fit.n_predictors(), B, seed,
                       [&](std::span<const Index> rows) { return refit_yt(fit, y, rows); });
}

BootDraws boot_yx(const MaskedMatrix& x, const Response& y, int H, int B,
                  std::uint64_t seed) {
  return run_resamples(x.rows(), x.cols(), B, seed, [&](std::span<const Index> rows) {
    return refit_yx(x, y, H, rows);
  });
}

namespace {

template <class Refit>
MatrixXd leave_one_out(Index n, Index p, Refit&& refit) {
  std::vector<std::optional<VectorXd>> values(n);
  parallel_for(n, [&](std::ptrdiff_t i) {
    std::vector<Index> rows;
    rows.reserve(n - 1);
    for (Index r = 0; r < n; ++r)
      if (r != i) rows.push_back(r);
    values[i] = refit(std::span<const Index>(rows));
  });
  Index kept = 0;
  for (const auto& v : values) kept += v.has_value();
  MatrixXd out(kept, p);
  Index r = 0;
  for (const auto& v : values)
    if (v) out.row(r++) = v->transpose();
  return out;
}

}  // namespace

MatrixXd jackknife_yt(const PlsGlrFit& fit, const Response& y) {
  return leave_one_out(fit.T.rows(), fit.n_predictors(),
                       [&](std::span<const Index> rows) { return refit_yt(fit, y, rows); });
}

MatrixXd jackknife_yx(const MaskedMatrix& x, const Response& y, int H) {
  return leave_one_out(x.rows(), x.cols(), [&](std::span<const Index> rows) {
    return refit_yx(x, y, H, rows);
  });
}

bool excludes_zero(double lo, double hi) { return lo > 0.0 || hi < 0.0; }

namespace {

double acceleration(const VectorXd& theta) {
  if (theta.size() < 2) return 0.0;
  const VectorXd d = theta.mean() - theta.array();
  const double s2 = d.squaredNorm();
  if (!(s2 > 0.0)) return 0.0;
  return d.array().cube().sum() / (6.0 * std::pow(s2, 1.5));
}

// BCa-adjusted quantile level for the normal quantile z of the nominal level.
double bca_level(double z0, double a, double z) {
  const double shifted = z0 + z;
  const double denom = 1.0 - a * shifted;
  if (!(denom > 0.0)) return shifted > 0.0 ? 1.0 : 0.0;
  return normal_cdf(z0 + shifted / denom);
}

}  // namespace

CiResult ci(const MatrixXd& beta_star, const VectorXd& beta_hat, double alpha, CiType type,
            const MatrixXd* jackknife) {
  const Index B = beta_star.rows(), p = beta_star.cols();
  if (B < 1) throw ConfigError("no bootstrap draws");
  if (beta_hat.size() != p) throw ConfigError("estimate and draws disagree on p");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (type == CiType::bca && (jackknife == nullptr || jackknife->cols() != p))
    throw ConfigError("BCa intervals need leave-one-out values");

  CiResult out;
  out.bounds.resize(p, 2);
  out.degenerate.assign(p, false);
  out.z0_clamped.assign(p, false);
  out.acceleration = VectorXd::Zero(p);
  const double lo_p = alpha / 2.0, hi_p = 1.0 - alpha / 2.0;
  const double z_lo = normal_quantile(lo_p), z_hi = normal_quantile(hi_p);

  std::vector<double> draws(B);
  for (Index j = 0; j < p; ++j) {
    for (Index b = 0; b < B; ++b) draws[b] = beta_star(b, j);
    std::sort(draws.begin(), draws.end());
    if (draws.front() == draws.back()) {
      out.bounds.row(j).setConstant(draws.front());
      out.degenerate[j] = true;
      continue;
    }
    const double est = beta_hat[j];
    switch (type) {
      case CiType::percentile:
        out.bounds(j, 0) = quantile_type7(draws, lo_p);
        out.bounds(j, 1) = quantile_type7(draws, hi_p);
        break;
      case CiType::basic:
        out.bounds(j, 0) = 2.0 * est - quantile_type7(draws, hi_p);
        out.bounds(j, 1) = 2.0 * est - quantile_type7(draws, lo_p);
        break;
      case CiType::normal: {
        const double mean = beta_star.col(j).mean();
        const double sd = B > 1 ? std::sqrt((beta_star.col(j).array() - mean).square().sum() /
                                            static_cast<double>(B - 1))
                                : 0.0;
        const double centre = est - (mean - est);
        out.bounds(j, 0) = centre + z_lo * sd;
        out.bounds(j, 1) = centre + z_hi * sd;
        break;
      }
      case CiType::bca: {
        const auto below = std::count_if(draws.begin(), draws.end(),
                                         [&](double v) { return v < est; });
        double frac = static_cast<double>(below) / static_cast<double>(B);
        if (below == 0 || below == B) {
          frac = (static_cast<double>(below) + 0.5) / (static_cast<double>(B) + 1.0);
          out.z0_clamped[j] = true;
        }
        const double z0 = normal_quantile(frac);
        const double a = acceleration(jackknife->col(j));
        out.acceleration[j] = a;
        out.bounds(j, 0) = quantile_type7(draws, bca_level(z0, a, z_lo));
        out.bounds(j, 1) = quantile_type7(draws, bca_level(z0, a, z_hi));
        break;
      }
    }
  }
  return out;
}

BootReport bootstrap(const MaskedMatrix& x, const Response& y, int H, const BootOptions& opts) {
  const PlsGlrFit fit = fit_plsglr(x, y, H);
  if (!fit.final_glm.converged)
    throw NumericalError("final GLM of the original fit did not converge");
  BootReport rep;
  rep.scheme = opts.scheme;
  rep.B = opts.B;
  rep.H = H;
  rep.alpha = opts.alpha;
  rep.ci_type = opts.ci_type;
  rep.names = x.col_names;
  rep.beta_hat = fit.slopes();

  const BootDraws draws = opts.scheme == BootScheme::yt ? boot_yt(fit, y, opts.B, opts.seed)
                                                        : boot_yx(x, y, H, opts.B, opts.seed);
  rep.beta_star = draws.beta_star;
  rep.skipped = draws.skipped;

  std::optional<MatrixXd> jack;
  if (opts.ci_type == CiType::bca)
    jack = opts.scheme == BootScheme::yt ? jackknife_yt(fit, y) : jackknife_yx(x, y, H);
  for (CiType t : kAllCiTypes) {
    if (t == CiType::bca && !jack) continue;
    rep.ci[t] = ci(rep.beta_star, rep.beta_hat, opts.alpha, t, jack ? &*jack : nullptr);
  }
  const auto& primary = rep.ci.at(opts.ci_type);
  for (Index j = 0; j < primary.bounds.rows(); ++j)
    rep.significant.push_back(excludes_zero(primary.bounds(j, 0), primary.bounds(j, 1)));
  if (jack) rep.jackknife_accel = rep.ci.at(CiType::bca).acceleration;
  return rep;
}

StabilityTable stability_and_pie(const MaskedMatrix& x, const Response& y, int Hmax,
                                 const VoteDistribution& votes, const BootOptions& opts,
                                 bool voted_only) {
  const Index p = x.cols();
  StabilityTable st;
  st.names = x.col_names;
  st.pi_e = VectorXd::Zero(p);
  for (int H = 1; H <= Hmax; ++H) {
    const double q = H < static_cast<int>(votes.freq.size()) ? votes.freq[H] : 0.0;
    st.H.push_back(H);
    st.weight.push_back(q);
    std::vector<bool> sig(p, false);
    bool available = false;
    if (q > 0.0 || !voted_only) {
      try {
        const BootReport rep = bootstrap(x, y, H, opts);
        sig = rep.significant;
        available = true;
      } catch (const Error& e) {
        if (q > 0.0)
          throw NumericalError("stability at H=" + std::to_string(H) + ": " + e.what());
      }
    }
    st.available.push_back(available);
    for (Index j = 0; j < p; ++j)
      if (sig[j]) st.pi_e[j] += q;
    st.significant.push_back(std::move(sig));
  }
  return st;
}

}  // namespace plscore
