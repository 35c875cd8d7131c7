#include "plscore/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plscore/error.hpp"
#include "plscore/parallel.hpp"
#include "plscore/rng.hpp"

namespace plscore {

std::vector<Index> CvPlan::test_rows(int repeat, int fold) const {
  std::vector<Index> rows;
  const auto& f = fold_of.at(repeat);
  for (Index i = 0; i < n; ++i)
    if (f[i] == fold) rows.push_back(i);
  return rows;
}

std::vector<Index> CvPlan::train_rows(int repeat, int fold) const {
  std::vector<Index> rows;
  const auto& f = fold_of.at(repeat);
  for (Index i = 0; i < n; ++i)
    if (f[i] != fold) rows.push_back(i);
  return rows;
}

CvPlan make_folds(Index n, int k, int repeats, std::uint64_t seed) {
  if (k < 2 || k > n) throw ConfigError("fold count must satisfy 2 <= k <= n");
  if (repeats < 1) throw ConfigError("repeats must be positive");
  CvPlan plan;
  plan.n = n;
  plan.k = k;
  plan.seed = seed;
  if (k == n) {
    plan.repeats = 1;
    std::vector<int> f(n);
    std::iota(f.begin(), f.end(), 0);
    plan.fold_of.push_back(std::move(f));
    return plan;
  }
  plan.repeats = repeats;
  for (int r = 0; r < repeats; ++r) {
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(r)});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> f(n);
    for (Index pos = 0; pos < n; ++pos) f[order[pos]] = static_cast<int>(pos % k);
    plan.fold_of.push_back(std::move(f));
  }
  return plan;
}

namespace {

bool is_gaussian(const Family& f) { return f.kind() == Family::Kind::gaussian; }
bool is_binomial(const Family& f) { return f.kind() == Family::Kind::binomial; }

double weighted_rss(const VectorXd& means, const Response& y) {
  return (y.y - means).cwiseAbs2().dot(y.weights);
}

InSampleCriteria in_sample_criteria(const MaskedMatrix& x, const Response& y, int Hmax) {
  InSampleCriteria s;
  const double n = static_cast<double>(y.size());
  const PlsGlrFit full = fit_plsglr(x, y, Hmax);
  for (int h = 0; h <= Hmax; ++h) {
    GlmFit g;
    if (h == 0) g = fit_glm(MatrixXd(y.size(), 0), y);
    else if (h == Hmax) g = full.final_glm;
    else g = fit_glm(full.T.leftCols(h), y);
    const double rss = weighted_rss(g.fitted_means, y);
    s.deviance.push_back(g.deviance);
    s.rss.push_back(rss);
    s.chi2_pearson.push_back(g.pearson_chi2);
    const double params = h + 1.0;
    if (is_gaussian(y.family)) {
      const double ll = n * std::log(rss / n);
      s.aic.push_back(ll + 2.0 * (params + 1.0));
      s.bic.push_back(ll + (params + 1.0) * std::log(n));
    } else {
      s.aic.push_back(g.deviance + 2.0 * params);
      s.bic.push_back(g.deviance + params * std::log(n));
    }
    double miss = 0.0;
    if (is_binomial(y.family))
      for (Index i = 0; i < y.size(); ++i)
        miss += ((g.fitted_means[i] >= 0.5 ? 1.0 : 0.0) != y.y[i]);
    s.miss_classed.push_back(miss);
    s.sig_pred.push_back(h == 0 ? 0 : full.sig_pred_count[h - 1]);
  }
  return s;
}

// Sums over the held-out rows of one fold, indexed by H - 1.
struct FoldSums {
  bool skipped = false;
  std::vector<double> press, prechi2, miss;
};

}  // namespace

PlsGlrFit fit_fold(const MaskedMatrix& x, const Response& y, int Hmax, const CvPlan& plan,
                   int repeat, int fold) {
  const auto train = plan.train_rows(repeat, fold);
  const MaskedMatrix xtr = subset_rows(x, train);
  validate(xtr);
  return fit_plsglr(xtr, subset_rows(y, train), Hmax);
}

CvResult cv_criteria(const MaskedMatrix& x, const Response& y, int Hmax, const CvPlan& plan) {
  if (plan.n != x.rows() || y.size() != x.rows())
    throw ConfigError("cross-validation plan does not match the data");
  Index min_train = plan.n;
  for (int r = 0; r < plan.repeats; ++r)
    for (int f = 0; f < plan.k; ++f)
      min_train = std::min<Index>(min_train, plan.train_rows(r, f).size());
  if (Hmax < 1 || Hmax > max_components(min_train, x.cols()))
    throw ConfigError("Hmax " + std::to_string(Hmax) +
                      " exceeds min(train size - 1, p) over folds");

  CvResult out;
  out.family = y.family;
  out.Hmax = Hmax;
  out.k = plan.k;
  out.in_sample = in_sample_criteria(x, y, Hmax);

  const int tasks = plan.repeats * plan.k;
  std::vector<FoldSums> sums(tasks);
  parallel_for(tasks, [&](std::ptrdiff_t task) {
    const int r = static_cast<int>(task / plan.k);
    const int f = static_cast<int>(task % plan.k);
    FoldSums& s = sums[task];
    PlsGlrFit fit;
    try {
      fit = fit_fold(x, y, Hmax, plan, r, f);
    } catch (const DataError&) {
      s.skipped = true;
      return;
    } catch (const NumericalError&) {
      s.skipped = true;
      return;
    }
    const auto test = plan.test_rows(r, f);
    const MaskedMatrix xte = subset_rows(x, test);
    const Response yte = subset_rows(y, test);
    const auto train = plan.train_rows(r, f);
    const Response ytr = subset_rows(y, train);
    const MatrixXd t_test = project_scores(fit, xte);
    s.press.assign(Hmax, 0.0);
    s.prechi2.assign(Hmax, 0.0);
    s.miss.assign(Hmax, 0.0);
    for (int h = 1; h <= Hmax; ++h) {
      const GlmFit g = h == Hmax ? fit.final_glm : fit_glm(fit.T.leftCols(h), ytr);
      const VectorXd eta = linear_predictor(g.coef, t_test.leftCols(h));
      for (Index i = 0; i < yte.size(); ++i) {
        double m = y.family.inv_link(eta[i]);
        const double resid = yte.y[i] - m;
        s.press[h - 1] += yte.weights[i] * resid * resid;
        y.family.clamp_mean(m);
        s.prechi2[h - 1] += yte.weights[i] * resid * resid / y.family.variance(m);
        if (is_binomial(y.family)) s.miss[h - 1] += ((m >= 0.5 ? 1.0 : 0.0) != yte.y[i]);
      }
    }
  });

  for (const auto& s : sums) out.skipped_folds += s.skipped;
  if (out.skipped_folds > 0.2 * tasks)
    throw NumericalError("more than 20% of cross-validation folds were skipped (" +
                         std::to_string(out.skipped_folds) + " of " +
                         std::to_string(tasks) + ")");

  const auto& ins = out.in_sample;
  for (int r = 0; r < plan.repeats; ++r) {
    RepeatRecord rec;
    rec.repeat = r;
    rec.press.assign(Hmax, 0.0);
    rec.prechi2.assign(Hmax, 0.0);
    rec.miss_classed.assign(Hmax, 0.0);
    for (int f = 0; f < plan.k; ++f) {
      const auto& s = sums[r * plan.k + f];
      if (s.skipped) {
        ++rec.skipped_folds;
        continue;
      }
      for (int h = 0; h < Hmax; ++h) {
        rec.press[h] += s.press[h];
        rec.prechi2[h] += s.prechi2[h];
        rec.miss_classed[h] += s.miss[h];
      }
    }
    double product = 1.0;
    for (int h = 1; h <= Hmax; ++h) {
      const double ratio = rec.press[h - 1] / ins.rss[h - 1];
      product *= ratio;
      rec.q2.push_back(1.0 - ratio);
      rec.q2cum.push_back(1.0 - product);
      rec.q2chi2.push_back(1.0 - rec.prechi2[h - 1] / ins.chi2_pearson[h - 1]);
    }
    out.records.push_back(std::move(rec));
  }

  out.table.family = y.family;
  out.table.k = plan.k;
  const RepeatRecord& first = out.records.front();
  const bool gauss = is_gaussian(y.family), binom = is_binomial(y.family);
  for (int h = 0; h <= Hmax; ++h) {
    CriteriaRow row;
    row.H = h;
    row.aic = ins.aic[h];
    row.bic = ins.bic[h];
    row.chi2_pearson = ins.chi2_pearson[h];
    if (binom) row.miss_classed = ins.miss_classed[h];
    if (h >= 1) {
      row.sig_pred = ins.sig_pred[h];
      row.q2chi2_cv = first.q2chi2[h - 1];
      row.prechi2 = first.prechi2[h - 1];
      if (binom) row.miss_classed_cv = first.miss_classed[h - 1];
      if (gauss) {
        row.press = first.press[h - 1];
        row.q2 = first.q2[h - 1];
        row.q2cum = first.q2cum[h - 1];
      }
    }
    out.table.rows.push_back(row);
  }
  return out;
}

SelectionRule parse_rule(std::string_view name) {
  if (name == "cv_missclassed") return SelectionRule::cv_missclassed;
  if (name == "q2_threshold") return SelectionRule::q2_threshold;
  if (name == "q2chi2_threshold") return SelectionRule::q2chi2_threshold;
  if (name == "aic") return SelectionRule::aic;
  if (name == "bic") return SelectionRule::bic;
  if (name == "sig_pred") return SelectionRule::sig_pred;
  throw ConfigError("unknown selection rule '" + std::string(name) + "'");
}

std::string_view rule_name(SelectionRule rule) {
  switch (rule) {
    case SelectionRule::cv_missclassed: return "cv_missclassed";
    case SelectionRule::q2_threshold: return "q2_threshold";
    case SelectionRule::q2chi2_threshold: return "q2chi2_threshold";
    case SelectionRule::aic: return "aic";
    case SelectionRule::bic: return "bic";
    case SelectionRule::sig_pred: return "sig_pred";
  }
  return "aic";
}

namespace {

// Index of the minimum over [first, values.size()), smallest index on ties.
int argmin_from(const std::vector<double>& values, int first) {
  int best = first;
  for (int h = first + 1; h < static_cast<int>(values.size()); ++h)
    if (values[h] < values[best]) best = h;
  return best;
}

// Largest H such that every value up to H passes the threshold.
int threshold_run(const std::vector<double>& q) {
  int H = 0;
  for (double v : q) {
    if (!(v >= kQ2Threshold)) break;
    ++H;
  }
  return H;
}

int pick(const CvResult& cv, const RepeatRecord& rec, SelectionRule rule) {
  switch (rule) {
    case SelectionRule::cv_missclassed:
      if (cv.family.kind() != Family::Kind::binomial)
        throw ConfigError("cv_missclassed rule requires a binomial family");
      return argmin_from(rec.miss_classed, 0) + 1;
    case SelectionRule::q2_threshold: return threshold_run(rec.q2);
    case SelectionRule::q2chi2_threshold: return threshold_run(rec.q2chi2);
    case SelectionRule::aic: return argmin_from(cv.in_sample.aic, 0);
    case SelectionRule::bic: return argmin_from(cv.in_sample.bic, 0);
    case SelectionRule::sig_pred: {
      int H = 0;
      for (int h = 1; h <= cv.Hmax && cv.in_sample.sig_pred[h] >= 1; ++h) H = h;
      return H;
    }
  }
  return 0;
}

}  // namespace

Selection select_components(const CvResult& cv, SelectionRule rule) {
  if (cv.records.empty()) throw ConfigError("no cross-validation records");
  Selection sel;
  sel.votes.counts.assign(cv.Hmax + 1, 0);
  for (const auto& rec : cv.records) {
    const int H = pick(cv, rec, rule);
    sel.picks.push_back(H);
    ++sel.votes.counts[H];
  }
  const double total = static_cast<double>(cv.records.size());
  for (int c : sel.votes.counts) sel.votes.freq.push_back(c / total);
  sel.H_star = static_cast<int>(
      std::max_element(sel.votes.counts.begin(), sel.votes.counts.end()) -
      sel.votes.counts.begin());
  return sel;
}

}  // namespace plscore
