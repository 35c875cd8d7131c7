#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "plscore/cli.hpp"
#include "plscore/csv.hpp"
#include "plscore/error.hpp"
#include "plscore/svg.hpp"

using namespace plscore;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "plscore_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(PLSCORE_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count(const std::string& hay, const std::string& needle) {
  int c = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++c;
  return c;
}

// Simulated dataset written once per test binary.
fs::path simulated(const std::string& family, int n, int p, double missing, int seed) {
  const fs::path dir = scratch("sim_" + family + "_" + std::to_string(n) + "_" +
                               std::to_string(p) + "_" + std::to_string(seed));
  std::ostringstream args;
  args << "simulate --family " << family << " --n " << n << " --p " << p << " --missing "
       << missing << " --seed " << seed << " --out " << dir;
  REQUIRE(cli(args.str()) == 0);
  return dir / "data.csv";
}

RunConfig base(const std::string& command, const fs::path& data, const fs::path& out) {
  RunConfig cfg;
  cfg.command = command;
  cfg.data = data;
  cfg.out = out;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("cv on simulated gaussian data") {
  const auto data = simulated("gaussian", 40, 5, 0.0, 7);
  const auto out = scratch("cv_gauss");
  REQUIRE(cli("cv --data " + data.string() +
              " --family gaussian --max-ncomp 4 --k 5 --repeats 10 --seed 7 --out " +
              out.string()) == 0);
  const auto crit = read_csv(out / "criteria.csv");
  CHECK(crit.header.front() == "Nb components");
  CHECK(crit.header[5] == "Miss Classed (5-CV)");
  REQUIRE(crit.rows.size() == 5);
  for (int h = 0; h <= 4; ++h) CHECK(crit.rows[h][0] == std::to_string(h));
  CHECK(crit.rows[0][8] == "NA");  // no PRESS without components

  const auto votes = read_csv(out / "votes.csv");
  int total = 0;
  for (const auto& r : votes.rows) total += std::stoi(r[1]);
  CHECK(total == 10);

  const auto cj = json::parse(slurp(out / "criteria.json"));
  CHECK(cj["rows"].size() == 5);
  CHECK(cj["selected_ncomp"].get<int>() >= 0);
  for (const char* f : {"cv_records.csv", "cv_votes.svg", "manifest.json"})
    CHECK(fs::exists(out / f));
}

TEST_CASE("configuration errors exit 2 and write nothing") {
  const auto data = simulated("gaussian", 40, 5, 0.0, 7);
  const auto out = scratch("bad_family");
  CHECK(cli("fit --data " + data.string() + " --family weibull --ncomp 2 --seed 1 --out " +
            out.string()) == 2);
  CHECK(!fs::exists(out));
  CHECK(cli("fit --data " + data.string() + " --ncomp 2 --out " + out.string()) == 2);
  CHECK(cli("fit --data /nonexistent.csv --ncomp 2 --seed 1 --out " + out.string()) == 2);
  CHECK(cli("dance --seed 1 --out " + out.string()) == 2);
  CHECK(cli("fit --data " + data.string() + " --ncomp 2 --seed 1 --bogus 3 --out " +
            out.string()) == 2);
  CHECK(cli("cv --data " + data.string() +
            " --max-ncomp 2 --rule cv_missclassed --seed 1 --out " + out.string()) == 2);
  CHECK(!fs::exists(out));
}

TEST_CASE("data and numerical errors map to their exit codes") {
  const auto dir = scratch("bad_data");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "data.csv");
    f << "a,b,y\n1,2,1\n3,x,0\n5,6,1\n";
  }
  CHECK(cli("fit --data " + (dir / "data.csv").string() +
            " --family binomial --ncomp 1 --seed 1 --out " + (dir / "o").string()) == 3);
  {
    std::ofstream f(dir / "data2.csv");
    f << "a,b,y\n1,2,1\n3,4,0\n5,6,2\n";
  }
  CHECK(cli("fit --data " + (dir / "data2.csv").string() +
            " --family binomial --ncomp 1 --seed 1 --out " + (dir / "o").string()) == 3);
  {
    // Second column is twice the first: no second component exists.
    std::ofstream f(dir / "data3.csv");
    f << "a,b,y\n1,2,0.5\n2,4,1.7\n3,6,2.2\n4,8,3.9\n5,10,5.1\n";
  }
  CHECK(cli("fit --data " + (dir / "data3.csv").string() +
            " --ncomp 2 --seed 1 --out " + (dir / "o").string()) == 4);
  CHECK(!fs::exists(dir / "o"));
}

TEST_CASE("fit writes the model and a biplot") {
  const auto data = simulated("binomial", 60, 6, 0.2, 3);
  const auto out = scratch("fit");
  REQUIRE(cli("fit --data " + data.string() + " --family binomial --ncomp 2 --seed 1 --out " +
              out.string()) == 0);
  const auto model = json::parse(slurp(out / "model.json"));
  CHECK(model["ncomp"] == 2);
  CHECK(model["predictors"].size() == 6);
  CHECK(model["beta_raw"]["slopes"].size() == 6);
  CHECK(model["weights"].size() == 6);
  CHECK(model["weights"][0].size() == 2);
  CHECK(model["component_coefficients"].size() == 2);
  for (const char* key : {"intercept", "modified_weights", "loadings", "beta_std", "scaling",
                          "final_glm", "family"})
    CHECK(model.contains(key));
  CHECK(fs::exists(out / "biplot.svg"));

  const auto out1 = scratch("fit1");
  REQUIRE(cli("fit --data " + data.string() + " --family binomial --ncomp 1 --seed 1 --out " +
              out1.string()) == 0);
  CHECK(!fs::exists(out1 / "biplot.svg"));
}

TEST_CASE("bootstrap outputs one interval per predictor") {
  const auto data = simulated("binomial", 60, 6, 0.1, 5);
  const auto out = scratch("boot");
  REQUIRE(cli("bootstrap --data " + data.string() +
              " --family binomial --ncomp 2 --B 200 --ci bca --seed 3 --out " + out.string()) ==
          0);
  const auto svg = slurp(out / "ci_forest.svg");
  CHECK(count(svg, "class=\"sig\"") + count(svg, "class=\"nonsig\"") == 2 * 6);
  const auto draws = read_csv(out / "beta_star.csv");
  CHECK(draws.rows.size() == 200);
  CHECK(draws.header.size() == 6);
  double v = 0.0;
  for (const auto& r : draws.rows)
    for (const auto& c : r) CHECK(parse_double(c, v));
  const auto ci = read_csv(out / "ci.csv");
  CHECK(ci.rows.size() == 6);
  CHECK(fs::exists(out / "boxplots.svg"));
  CHECK(json::parse(slurp(out / "bootstrap.json"))["intervals"].contains("bca"));
}

TEST_CASE("stability writes the grid") {
  const auto data = simulated("binomial", 50, 4, 0.0, 9);
  const auto out = scratch("stab");
  REQUIRE(cli("stability --data " + data.string() +
              " --family binomial --max-ncomp 2 --k 5 --repeats 4 --B 100 --ci percentile "
              "--seed 3 --out " + out.string()) == 0);
  const auto st = json::parse(slurp(out / "stability.json"));
  CHECK(st["pi_e"].size() == 4);
  for (const auto& v : st["pi_e"]) {
    CHECK(v.get<double>() >= 0.0);
    CHECK(v.get<double>() <= 1.0);
  }
  CHECK(fs::exists(out / "sig_grid.svg"));
  CHECK(read_csv(out / "stability.csv").rows.size() >= 2);
}

TEST_CASE("manifest digests are reproducible and inputs untouched") {
  const auto data = simulated("binomial", 48, 5, 0.1, 11);
  const std::string before = slurp(data);
  auto cfg = base("cv", data, scratch("m1"));
  cfg.family = "binomial";
  cfg.max_ncomp = 3;
  cfg.k = 4;
  cfg.repeats = 5;
  cfg.threads = 1;
  const auto a = execute(cfg);
  cfg.threads = 4;
  const auto b = execute(cfg);
  CHECK(a.at("manifest.json") == b.at("manifest.json"));
  CHECK(a == b);
  const auto m = json::parse(a.at("manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["version"] == kVersion);
  for (const auto& f : m["files"])
    CHECK(f["sha256"] == sha256_hex(a.at(f["file"].get<std::string>())));
  CHECK(slurp(data) == before);

  cfg.seed = 8;
  CHECK(execute(cfg).at("manifest.json") != a.at("manifest.json"));
}

TEST_CASE("config file values yield to flags") {
  const auto data = simulated("gaussian", 40, 5, 0.0, 7);
  const auto dir = scratch("cfgfile");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.conf");
    f << "data=" << data.string() << "\nncomp=3\nseed=5\nout=" << (dir / "a").string() << "\n";
  }
  REQUIRE(cli("fit --config " + (dir / "run.conf").string()) == 0);
  CHECK(json::parse(slurp(dir / "a" / "model.json"))["ncomp"] == 3);
  REQUIRE(cli("fit --config " + (dir / "run.conf").string() + " --ncomp 1 --out " +
              (dir / "b").string()) == 0);
  CHECK(json::parse(slurp(dir / "b" / "model.json"))["ncomp"] == 1);
}

TEST_CASE("simulated data round-trips through the loader") {
  const auto data = simulated("poisson", 30, 4, 0.25, 13);
  LoadOptions opts;
  opts.response_col = "y";
  opts.family = Family(Family::Kind::poisson);
  const auto ds = load_csv(data, opts);
  CHECK(ds.x.rows() == 30);
  CHECK(ds.x.cols() == 4);
  CHECK(!ds.x.mask.all());
  std::ostringstream again;
  save_csv(again, ds.x, ds.y, "y");
  CHECK(again.str() == slurp(data));
}

TEST_CASE("svg emitter") {
  const json forest{{"names", {"x1"}}, {"estimate", {0.5}}, {"lower", {-1.0}}, {"upper", {2.0}}};
  const auto svg = emit_svg(SvgKind::ci_forest, forest);
  CHECK(svg == emit_svg(SvgKind::ci_forest, forest));
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "class=\"nonsig\"") == 2);
  CHECK(count(svg, "class=\"sig\"") == 0);
  CHECK(svg.find("class=\"zero\"") != std::string::npos);

  const json sig{{"names", {"x1"}}, {"estimate", {0.5}}, {"lower", {0.1}}, {"upper", {2.0}}};
  CHECK(count(emit_svg(SvgKind::ci_forest, sig), "class=\"sig\"") == 2);

  const json empty{{"names", json::array()}, {"estimate", json::array()},
                   {"lower", json::array()}, {"upper", json::array()}};
  const auto axes = emit_svg(SvgKind::ci_forest, empty);
  CHECK(axes.find("class=\"axis\"") != std::string::npos);
  CHECK(axes.find("</svg>") != std::string::npos);

  CHECK_THROWS_WITH_AS(emit_svg(SvgKind::ci_forest, json{{"names", {"a"}}}),
                       doctest::Contains("schema mismatch"), DataError);
  CHECK_THROWS_AS(emit_svg(SvgKind::biplot, forest), DataError);
  CHECK_THROWS_AS(parse_svg_kind("pie"), ConfigError);

  const json votes{{"counts", {0, 3, 7}}, {"frequency", {0.0, 0.3, 0.7}}};
  CHECK(emit_svg(SvgKind::cv_votes, votes) == emit_svg(SvgKind::cv_votes, votes));
  const json grid{{"names", {"a", "b"}},
                  {"ncomp", {1, 2}},
                  {"significant", {{true, false}, {true, true}}},
                  {"pi_e", {1.0, 0.5}}};
  const auto g = emit_svg(SvgKind::sig_grid, grid);
  CHECK(g.find("0.5") != std::string::npos);
}
