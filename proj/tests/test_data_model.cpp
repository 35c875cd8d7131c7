#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "plscore/csv.hpp"
#include "plscore/error.hpp"
#include "plscore/simulate.hpp"

using namespace plscore;

namespace {

LoadOptions opts(const std::string& resp, Family f = Family(Family::Kind::gaussian)) {
  LoadOptions o;
  o.response_col = resp;
  o.family = f;
  return o;
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("family link round trip and deviance") {
  for (auto kind : {Family::Kind::gaussian, Family::Kind::binomial, Family::Kind::poisson}) {
    const Family f(kind);
    for (double m : {0.01, 0.2, 0.5, 0.77, 0.999}) {
      CHECK(f.inv_link(f.link(m)) == doctest::Approx(m).epsilon(1e-12));
      CHECK(f.unit_deviance(m, m) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(f.unit_deviance(kind == Family::Kind::binomial ? 1.0 : 2.0, m) >= 0.0);
    }
  }
  CHECK_THROWS_AS(Family::parse("gamma"), ConfigError);
  CHECK(Family::parse("poisson").kind() == Family::Kind::poisson);
}

TEST_CASE("load_csv marks exactly the NA cells") {
  const auto ds = load_csv_text("a,b,y\n1,2,0.5\nNA,4,1.5\n5,6,2.5\n7,8,3\n", opts("y"));
  CHECK(ds.x.rows() == 4);
  CHECK(ds.x.cols() == 2);
  CHECK(ds.x.missing_count() == 1);
  CHECK_FALSE(ds.x.mask(1, 0));
  CHECK(ds.x.col_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_csv honours quoting and a row-id column") {
  const auto ds = load_csv_text(
      "\"\",\"col, one\",b,y\n\"r1\",1,\"2\",0\nr2,3,4,1\nr3,5,\"\",1\n",
      opts("y", Family(Family::Kind::binomial)));
  CHECK(ds.x.row_ids == std::vector<std::string>{"r1", "r2", "r3"});
  CHECK(ds.x.col_names[0] == "col, one");
  CHECK_FALSE(ds.x.mask(2, 1));
}

TEST_CASE("load_csv rejects invalid inputs") {
  const auto bin = Family(Family::Kind::binomial);
  CHECK(error_of([&] { load_csv_text("a,b,y\n1,2,0\n2,3,2\n3,1,1\n", opts("y", bin)); })
            .find("invalid binomial response") != std::string::npos);
  CHECK(error_of([&] { load_csv_text("a,b,y\n1,2,0\n2,3,NA\n3,1,1\n", opts("y")); })
            .find("row '2'") != std::string::npos);
  CHECK(error_of([&] { load_csv_text("a,b,y\n1,2,0\n1,3,1\n1,1,1\n", opts("y")); })
            .find("constant column 'a'") != std::string::npos);
  CHECK(error_of([&] { load_csv_text("a,b,y\n1,2,0\nNA,NA,1\n3,1,1\n", opts("y")); })
            .find("no present predictor") != std::string::npos);
  CHECK_THROWS_AS(load_csv_text("a,b,y\n1,2,0\n1,x,1\n2,1,1\n", opts("y")), DataError);
  CHECK_THROWS_AS(load_csv_text("a,b\n1,2\n2,1\n", opts("y")), DataError);
}

TEST_CASE("standardize matches hand computations") {
  MatrixXd v(3, 2);
  v << 1, 1, 2, 0, 3, 3;
  Mask m = Mask::Constant(3, 2, true);
  m(1, 1) = false;
  const auto x = MaskedMatrix::from_mask(v, m);
  const auto [s, rec] = standardize(x);
  CHECK(s.values(0, 0) == doctest::Approx(-1.0));
  CHECK(s.values(1, 0) == doctest::Approx(0.0));
  CHECK(s.values(2, 0) == doctest::Approx(1.0));
  CHECK(rec.col_sds[0] == doctest::Approx(1.0));
  CHECK(s.values(0, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.values(2, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(s.mask(1, 1));
  CHECK(std::isnan(s.values(1, 1)));
}

TEST_CASE("standardize reduces to textbook scaling on complete data") {
  std::mt19937_64 rng(3);
  const MatrixXd v = oracle::random_matrix(rng, 12, 4);
  const auto [s, rec] = standardize(MaskedMatrix::dense(v));
  CHECK((s.values - oracle::standardize(v)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("standardized columns have mean 0, sd 1 and standardize is idempotent") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sim = simulate(40, 6, Family(Family::Kind::gaussian), 0.3, seed);
    const auto [s, rec] = standardize(sim.x);
    const auto [s2, rec2] = standardize(s);
    for (Index j = 0; j < s.cols(); ++j) {
      double sum = 0, ss = 0, cnt = 0;
      for (Index i = 0; i < s.rows(); ++i)
        if (s.mask(i, j)) {
          sum += s.values(i, j);
          ss += s.values(i, j) * s.values(i, j);
          ++cnt;
        }
      CHECK(std::abs(sum / cnt) < 1e-10);
      CHECK(std::abs(std::sqrt(ss / (cnt - 1)) - 1.0) < 1e-10);
      CHECK(std::abs(rec2.col_means[j]) < 1e-10);
      CHECK(std::abs(rec2.col_sds[j] - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("save_csv then load_csv round-trips values, mask and names") {
  const auto dir = std::filesystem::temp_directory_path() / "plscore_dm_test";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto sim = simulate(25, 4, Family(Family::Kind::binomial), 0.25, seed);
    sim.x.col_names[1] = "name, with \"quotes\"";
    const auto path = dir / "rt.csv";
    save_csv(path, sim.x, sim.y, "status");
    const auto back = load_csv(path, opts("status", Family(Family::Kind::binomial)));
    CHECK((back.x.mask == sim.x.mask).all());
    CHECK(back.x.col_names == sim.x.col_names);
    CHECK(back.x.row_ids == sim.x.row_ids);
    CHECK(back.y.y == sim.y.y);
    bool same = true;
    for (Index i = 0; i < sim.x.rows(); ++i)
      for (Index j = 0; j < sim.x.cols(); ++j)
        if (sim.x.mask(i, j)) same = same && back.x.values(i, j) == sim.x.values(i, j);
    CHECK(same);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("simulate is deterministic and respects the family domain") {
  const auto a = simulate(20, 5, Family(Family::Kind::gaussian), 0.0, 1);
  const auto b = simulate(20, 5, Family(Family::Kind::gaussian), 0.0, 1);
  CHECK(a.x.values == b.x.values);
  CHECK(a.y.y == b.y.y);
  CHECK(a.true_beta == b.true_beta);

  const auto bin = simulate(50, 4, Family(Family::Kind::binomial), 0.1, 9);
  CHECK((bin.y.y.array() == 0.0 || bin.y.y.array() == 1.0).all());
  const auto poi = simulate(50, 4, Family(Family::Kind::poisson), 0.1, 9);
  CHECK((poi.y.y.array() >= 0.0).all());
  CHECK((poi.y.y.array() == poi.y.y.array().floor()).all());
}

TEST_CASE("simulate realizes the requested missing fraction") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = simulate(50, 10, Family(Family::Kind::gaussian), 0.3, seed);
    const double frac = double(s.x.missing_count()) / double(s.x.values.size());
    CHECK(std::abs(frac - 0.3) <= 0.05);
    CHECK(satisfies_invariants(s.x));
  }
}

TEST_CASE("simulate rejects infeasible mask rates") {
  CHECK_THROWS_AS(simulate(2, 1, Family(Family::Kind::gaussian), 0.999, 1), DataError);
  CHECK_THROWS_AS(simulate(10, 2, Family(Family::Kind::gaussian), 1.0, 1), ConfigError);
}
