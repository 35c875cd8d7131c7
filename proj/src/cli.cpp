#include "plscore/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "plscore/bootstrap.hpp"
#include "plscore/csv.hpp"
#include "plscore/error.hpp"
#include "plscore/parallel.hpp"
#include "plscore/report.hpp"
#include "plscore/simulate.hpp"
#include "plscore/svg.hpp"

namespace plscore {

namespace {

const std::set<std::string> kCommands{"fit", "cv", "bootstrap", "stability", "simulate"};

std::string csv_text(const CsvTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

bool needs_data(const RunConfig& cfg) { return cfg.command != "simulate"; }

SelectionRule effective_rule(const RunConfig& cfg, Family family) {
  if (!cfg.rule.empty()) return parse_rule(cfg.rule);
  return family.kind() == Family::Kind::binomial ? SelectionRule::cv_missclassed
                                                 : SelectionRule::q2_threshold;
}

json config_echo(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["family"] = cfg.family;
  j["seed"] = *cfg.seed;
  if (needs_data(cfg)) {
    j["data"] = cfg.data.string();
    j["response"] = cfg.response;
    if (!cfg.weights.empty()) j["weights"] = cfg.weights;
    j["na_tokens"] = cfg.na_tokens;
  }
  if (cfg.command == "fit" || cfg.command == "bootstrap") j["ncomp"] = cfg.ncomp;
  if (cfg.command == "cv" || cfg.command == "stability") {
    j["max_ncomp"] = cfg.max_ncomp;
    j["k"] = cfg.k;
    j["repeats"] = cfg.repeats;
    j["rule"] = std::string(rule_name(effective_rule(cfg, Family::parse(cfg.family))));
  }
  if (cfg.command == "bootstrap" || cfg.command == "stability") {
    j["scheme"] = cfg.scheme;
    j["B"] = cfg.B;
    j["ci"] = cfg.ci;
    j["alpha"] = cfg.alpha;
  }
  if (cfg.command == "simulate") {
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["missing"] = cfg.missing;
  }
  j["figures"] = cfg.figures;
  return j;
}

Dataset load(const RunConfig& cfg) {
  LoadOptions opts;
  opts.na_tokens = {cfg.na_tokens.begin(), cfg.na_tokens.end()};
  opts.response_col = cfg.response;
  opts.family = Family::parse(cfg.family);
  opts.weights_col = cfg.weights;
  return load_csv(cfg.data, opts);
}

BootOptions boot_options(const RunConfig& cfg) {
  BootOptions o;
  o.scheme = parse_scheme(cfg.scheme);
  o.B = cfg.B;
  o.seed = *cfg.seed;
  o.alpha = cfg.alpha;
  o.ci_type = parse_ci_type(cfg.ci);
  return o;
}

void run_fit(const RunConfig& cfg, Artifacts& art) {
  const Dataset ds = load(cfg);
  const PlsGlrFit fit = fit_plsglr(ds.x, ds.y, cfg.ncomp);
  art["model.json"] = model_json(fit).dump(2) + "\n";
  if (cfg.figures && fit.H >= 2)
    art["biplot.svg"] = emit_svg(SvgKind::biplot, biplot_payload(biplot_data(fit, ds.x.row_ids)));
}

void run_cv(const RunConfig& cfg, Artifacts& art) {
  const Dataset ds = load(cfg);
  const CvPlan plan = make_folds(ds.x.rows(), cfg.k, cfg.repeats, *cfg.seed);
  const CvResult cv = cv_criteria(ds.x, ds.y, cfg.max_ncomp, plan);
  const Selection sel = select_components(cv, effective_rule(cfg, ds.y.family));
  art["criteria.csv"] = csv_text(criteria_csv(cv.table));
  json cj = criteria_json(cv.table);
  cj["selected_ncomp"] = sel.H_star;
  cj["skipped_folds"] = cv.skipped_folds;
  art["criteria.json"] = cj.dump(2) + "\n";
  art["votes.csv"] = csv_text(votes_csv(sel.votes));
  art["cv_records.csv"] = csv_text(cv_records_csv(cv));
  if (cfg.figures) art["cv_votes.svg"] = emit_svg(SvgKind::cv_votes, votes_payload(sel.votes));
}

void run_bootstrap(const RunConfig& cfg, Artifacts& art) {
  const Dataset ds = load(cfg);
  const BootOptions opts = boot_options(cfg);
  const BootReport rep = bootstrap(ds.x, ds.y, cfg.ncomp, opts);
  art["beta_star.csv"] = csv_text(beta_star_csv(rep));
  art["ci.csv"] = csv_text(ci_csv(rep));
  art["bootstrap.json"] = boot_json(rep).dump(2) + "\n";
  if (cfg.figures) {
    art["boxplots.svg"] = emit_svg(SvgKind::boxplots, boxplot_payload(rep));
    art["ci_forest.svg"] = emit_svg(SvgKind::ci_forest, ci_forest_payload(rep, opts.ci_type));
  }
}

void run_stability(const RunConfig& cfg, Artifacts& art) {
  const Dataset ds = load(cfg);
  const CvPlan plan = make_folds(ds.x.rows(), cfg.k, cfg.repeats, *cfg.seed);
  const CvResult cv = cv_criteria(ds.x, ds.y, cfg.max_ncomp, plan);
  const Selection sel = select_components(cv, effective_rule(cfg, ds.y.family));
  const StabilityTable st =
      stability_and_pie(ds.x, ds.y, cfg.max_ncomp, sel.votes, boot_options(cfg));
  art["votes.csv"] = csv_text(votes_csv(sel.votes));
  art["stability.csv"] = csv_text(stability_csv(st));
  art["stability.json"] = stability_json(st).dump(2) + "\n";
  if (cfg.figures) art["sig_grid.svg"] = emit_svg(SvgKind::sig_grid, sig_grid_payload(st));
}

void run_simulate(const RunConfig& cfg, Artifacts& art) {
  const SimulatedData sim =
      simulate(cfg.n, cfg.p, Family::parse(cfg.family), cfg.missing, *cfg.seed);
  std::ostringstream buf;
  save_csv(buf, sim.x, sim.y, cfg.response);
  art["data.csv"] = buf.str();
  CsvTable beta;
  beta.header = {"predictor", "beta"};
  for (Index j = 0; j < sim.true_beta.size(); ++j)
    beta.rows.push_back({sim.x.col_names[j], format_double(sim.true_beta[j])});
  art["true_beta.csv"] = csv_text(beta);
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i)
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

void validate(const RunConfig& cfg) {
  if (!kCommands.count(cfg.command)) throw ConfigError("unknown command '" + cfg.command + "'");
  if (!cfg.seed) throw ConfigError("--seed is mandatory");
  if (cfg.out.empty()) throw ConfigError("--out is mandatory");
  const Family family = Family::parse(cfg.family);
  if (needs_data(cfg)) {
    if (cfg.data.empty()) throw ConfigError("--data is mandatory for " + cfg.command);
    if (!std::filesystem::is_regular_file(cfg.data))
      throw ConfigError("data file '" + cfg.data.string() + "' does not exist");
    if (cfg.response.empty()) throw ConfigError("--response is mandatory");
  }
  if ((cfg.command == "fit" || cfg.command == "bootstrap") && cfg.ncomp < 1)
    throw ConfigError("--ncomp must be at least 1");
  if (cfg.command == "cv" || cfg.command == "stability") {
    if (cfg.max_ncomp < 1) throw ConfigError("--max-ncomp must be at least 1");
    if (cfg.k < 2) throw ConfigError("--k must be at least 2");
    if (cfg.repeats < 1) throw ConfigError("--repeats must be positive");
    const SelectionRule rule = effective_rule(cfg, family);
    if (rule == SelectionRule::cv_missclassed && family.kind() != Family::Kind::binomial)
      throw ConfigError("rule cv_missclassed requires the binomial family");
  }
  if (cfg.command == "bootstrap" || cfg.command == "stability") {
    parse_scheme(cfg.scheme);
    parse_ci_type(cfg.ci);
    if (cfg.B < 1) throw ConfigError("--B must be positive");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
  }
  if (cfg.command == "simulate") {
    if (cfg.n < 2 || cfg.p < 1) throw ConfigError("simulate needs --n >= 2 and --p >= 1");
    if (!(cfg.missing >= 0.0 && cfg.missing < 1.0))
      throw ConfigError("--missing must lie in [0, 1)");
  }
}

Artifacts execute(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.threads > 0) set_num_threads(cfg.threads);
  Artifacts art;
  if (cfg.command == "fit") run_fit(cfg, art);
  else if (cfg.command == "cv") run_cv(cfg, art);
  else if (cfg.command == "bootstrap") run_bootstrap(cfg, art);
  else if (cfg.command == "stability") run_stability(cfg, art);
  else run_simulate(cfg, art);

  json files = json::array();
  for (const auto& [name, bytes] : art) files.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}});
  json manifest{{"tool", "plscore"},
                {"version", kVersion},
                {"seed", *cfg.seed},
                {"config", config_echo(cfg)},
                {"files", files}};
  art["manifest.json"] = manifest.dump(2) + "\n";
  return art;
}

int run(const RunConfig& cfg) {
  Artifacts art;
  try {
    art = execute(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << '\n';
    return kExitNumerical;
  }
  try {
    std::filesystem::create_directories(cfg.out);
    for (const auto& [name, bytes] : art) {
      std::ofstream out(cfg.out / name, std::ios::binary);
      out << bytes;
      if (!out) throw DataError("cannot write '" + (cfg.out / name).string() + "'");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Partial least squares (generalized) linear regression for incomplete data"};
  app.set_config("--config", "", "Flat key=value configuration file");
  app.set_version_flag("--version", kVersion);
  RunConfig cfg;
  std::uint64_t seed = 0;
  std::string data, out;

  app.add_option("command", cfg.command, "fit | cv | bootstrap | stability | simulate")
      ->required();
  app.add_option("--data", data, "Input CSV");
  app.add_option("--response", cfg.response, "Response column name");
  app.add_option("--weights", cfg.weights, "Observation weight column");
  app.add_option("--family", cfg.family, "gaussian | binomial | poisson");
  app.add_option("--na", cfg.na_tokens, "Tokens marking missing cells");
  app.add_option("--ncomp", cfg.ncomp, "Number of components H");
  app.add_option("--max-ncomp", cfg.max_ncomp, "Largest number of components Hmax");
  app.add_option("--k", cfg.k, "Cross-validation folds (k = n gives leave-one-out)");
  app.add_option("--repeats", cfg.repeats, "Cross-validation repeats");
  app.add_option("--rule", cfg.rule,
                 "cv_missclassed | q2_threshold | q2chi2_threshold | aic | bic | sig_pred");
  app.add_option("--scheme", cfg.scheme, "Bootstrap scheme: yt | yx");
  app.add_option("--B", cfg.B, "Bootstrap resamples");
  app.add_option("--ci", cfg.ci, "percentile | basic | normal | bca");
  app.add_option("--alpha", cfg.alpha, "Interval level is 1 - alpha");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (mandatory)");
  app.add_option("--out", out, "Output directory");
  app.add_option("--figures", cfg.figures, "Emit SVG figures (true/false)");
  app.add_option("--threads", cfg.threads, "Worker threads");
  app.add_option("--n", cfg.n, "simulate: observations");
  app.add_option("--p", cfg.p, "simulate: predictors");
  app.add_option("--missing", cfg.missing, "simulate: missing cell fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitConfig;
  }
  if (seed_opt->count() > 0) cfg.seed = seed;
  cfg.data = data;
  cfg.out = out;
  return run(cfg);
}

}  // namespace plscore
