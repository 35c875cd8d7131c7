#include "plscore/report.hpp"

namespace plscore {

namespace {

json to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

json to_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

std::string k_label(int k, const char* what) {
  return std::string(what) + " (" + std::to_string(k) + "-CV)";
}

}  // namespace

json model_json(const PlsGlrFit& fit) {
  json j;
  j["family"] = std::string(fit.family.name());
  j["ncomp"] = fit.H;
  j["predictors"] = fit.col_names;
  j["intercept"] = fit.mu;
  j["component_coefficients"] = to_json(fit.c);
  j["weights"] = to_json(fit.W);
  j["modified_weights"] = to_json(fit.W_star);
  j["loadings"] = to_json(fit.P);
  j["beta_std"] = to_json(fit.beta_std);
  j["beta_raw"] = {{"intercept", fit.beta_raw[0]}, {"slopes", to_json(fit.slopes())}};
  j["scaling"] = {{"col_means", to_json(fit.scaling.col_means)},
                  {"col_sds", to_json(fit.scaling.col_sds)}};
  j["significant_predictors"] = fit.sig_pred_count;
  j["final_glm"] = {{"coef", to_json(fit.final_glm.coef)},
                    {"deviance", fit.final_glm.deviance},
                    {"pearson_chi2", fit.final_glm.pearson_chi2},
                    {"converged", fit.final_glm.converged},
                    {"iterations", fit.final_glm.n_iter}};
  return j;
}

CsvTable criteria_csv(const CriteriaTable& table) {
  CsvTable t;
  t.header = {"Nb components",
              "AIC",
              "BIC",
              "Miss Classed",
              "Significant pred.",
              k_label(table.k, "Miss Classed"),
              k_label(table.k, "Q²χ²"),
              "χ² Pearson",
              k_label(table.k, "PRESS"),
              k_label(table.k, "Q²"),
              k_label(table.k, "Q²cum"),
              k_label(table.k, "PREχ²")};
  for (const auto& r : table.rows)
    t.rows.push_back({std::to_string(r.H), opt_cell(r.aic), opt_cell(r.bic),
                      opt_cell(r.miss_classed), opt_cell(r.sig_pred),
                      opt_cell(r.miss_classed_cv), opt_cell(r.q2chi2_cv),
                      opt_cell(r.chi2_pearson), opt_cell(r.press), opt_cell(r.q2),
                      opt_cell(r.q2cum), opt_cell(r.prechi2)});
  return t;
}

json criteria_json(const CriteriaTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"ncomp", r.H},
                    {"AIC", opt_json(r.aic)},
                    {"BIC", opt_json(r.bic)},
                    {"Miss Classed", opt_json(r.miss_classed)},
                    {"Significant pred.", opt_json(r.sig_pred)},
                    {"Miss Classed (CV)", opt_json(r.miss_classed_cv)},
                    {"Q2chi2 (CV)", opt_json(r.q2chi2_cv)},
                    {"chi2 Pearson", opt_json(r.chi2_pearson)},
                    {"PRESS", opt_json(r.press)},
                    {"Q2", opt_json(r.q2)},
                    {"Q2cum", opt_json(r.q2cum)},
                    {"PREchi2", opt_json(r.prechi2)}});
  return {{"family", std::string(table.family.name())}, {"k", table.k}, {"rows", rows}};
}

CsvTable votes_csv(const VoteDistribution& votes) {
  CsvTable t;
  t.header = {"ncomp", "count", "frequency"};
  for (std::size_t h = 0; h < votes.counts.size(); ++h)
    t.rows.push_back({std::to_string(h), std::to_string(votes.counts[h]),
                      format_double(votes.freq[h])});
  return t;
}

CsvTable cv_records_csv(const CvResult& cv) {
  CsvTable t;
  t.header = {"repeat", "ncomp", "press", "prechi2", "miss_classed", "q2", "q2cum", "q2chi2",
              "skipped_folds"};
  for (const auto& rec : cv.records)
    for (int h = 1; h <= cv.Hmax; ++h)
      t.rows.push_back({std::to_string(rec.repeat + 1), std::to_string(h),
                        format_double(rec.press[h - 1]), format_double(rec.prechi2[h - 1]),
                        format_double(rec.miss_classed[h - 1]), format_double(rec.q2[h - 1]),
                        format_double(rec.q2cum[h - 1]), format_double(rec.q2chi2[h - 1]),
                        std::to_string(rec.skipped_folds)});
  return t;
}

CsvTable beta_star_csv(const BootReport& rep) {
  CsvTable t;
  t.header = rep.names;
  for (Index b = 0; b < rep.beta_star.rows(); ++b) {
    std::vector<std::string> row;
    for (Index j = 0; j < rep.beta_star.cols(); ++j) row.push_back(format_double(rep.beta_star(b, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable ci_csv(const BootReport& rep) {
  CsvTable t;
  t.header = {"predictor", "estimate"};
  for (const auto& [type, res] : rep.ci) {
    const std::string n(ci_type_name(type));
    t.header.insert(t.header.end(), {n + "_lower", n + "_upper", n + "_significant"});
  }
  for (std::size_t j = 0; j < rep.names.size(); ++j) {
    std::vector<std::string> row{rep.names[j], format_double(rep.beta_hat[j])};
    for (const auto& [type, res] : rep.ci) {
      const double lo = res.bounds(j, 0), hi = res.bounds(j, 1);
      row.insert(row.end(), {format_double(lo), format_double(hi),
                             excludes_zero(lo, hi) ? "1" : "0"});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

json boot_json(const BootReport& rep) {
  json j;
  j["scheme"] = std::string(scheme_name(rep.scheme));
  j["B"] = rep.B;
  j["ncomp"] = rep.H;
  j["alpha"] = rep.alpha;
  j["ci_type"] = std::string(ci_type_name(rep.ci_type));
  j["skipped"] = rep.skipped;
  j["predictors"] = rep.names;
  j["estimate"] = to_json(rep.beta_hat);
  json cis = json::object();
  for (const auto& [type, res] : rep.ci)
    cis[std::string(ci_type_name(type))] = {{"lower", to_json(VectorXd(res.bounds.col(0)))},
                                           {"upper", to_json(VectorXd(res.bounds.col(1)))}};
  j["intervals"] = cis;
  j["significant"] = rep.significant;
  if (rep.jackknife_accel.size() > 0) j["acceleration"] = to_json(rep.jackknife_accel);
  return j;
}

CsvTable stability_csv(const StabilityTable& st) {
  CsvTable t;
  t.header = {"predictor"};
  for (int H : st.H) t.header.push_back("H" + std::to_string(H));
  t.header.push_back("pi_e");
  for (std::size_t j = 0; j < st.names.size(); ++j) {
    std::vector<std::string> row{st.names[j]};
    for (std::size_t h = 0; h < st.H.size(); ++h)
      row.push_back(!st.available[h] ? "NA" : st.significant[h][j] ? "1" : "0");
    row.push_back(format_double(st.pi_e[j]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

json stability_json(const StabilityTable& st) {
  json sig = json::array();
  for (const auto& row : st.significant) sig.push_back(row);
  return {{"predictors", st.names},  {"ncomp", st.H},
          {"available", st.available}, {"vote_weight", st.weight},
          {"significant", sig},      {"pi_e", to_json(st.pi_e)}};
}

json votes_payload(const VoteDistribution& votes) {
  return {{"counts", votes.counts}, {"frequency", votes.freq}};
}

json boxplot_payload(const BootReport& rep) {
  json draws = json::array();
  for (Index j = 0; j < rep.beta_star.cols(); ++j) draws.push_back(to_json(VectorXd(rep.beta_star.col(j))));
  return {{"names", rep.names}, {"draws", draws}};
}

json ci_forest_payload(const BootReport& rep, CiType type) {
  const auto& res = rep.ci.at(type);
  return {{"names", rep.names},
          {"estimate", to_json(rep.beta_hat)},
          {"lower", to_json(VectorXd(res.bounds.col(0)))},
          {"upper", to_json(VectorXd(res.bounds.col(1)))},
          {"title", std::string(ci_type_name(type)) + " bootstrap intervals (" +
                        std::string(scheme_name(rep.scheme)) + ")"}};
}

json sig_grid_payload(const StabilityTable& st) {
  json sig = json::array();
  for (const auto& row : st.significant) sig.push_back(row);
  return {{"names", st.names}, {"ncomp", st.H}, {"significant", sig}, {"pi_e", to_json(st.pi_e)}};
}

json biplot_payload(const BiplotData& b) {
  return {{"row_ids", b.row_ids},
          {"scores", to_json(b.scores)},
          {"col_names", b.col_names},
          {"loadings", to_json(b.loadings)}};
}

}  // namespace plscore
