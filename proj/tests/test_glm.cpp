#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plscore/error.hpp"
#include "plscore/glm.hpp"

using namespace plscore;

namespace {

const Family kGauss(Family::Kind::gaussian);
const Family kBinom(Family::Kind::binomial);
const Family kPois(Family::Kind::poisson);

Response resp(VectorXd y, Family f) { return Response::make(std::move(y), f); }

}  // namespace

TEST_CASE("intercept-only binomial matches the closed form") {
  for (int k : {1, 3, 7, 11}) {
    const int n = 12;
    VectorXd y = VectorXd::Zero(n);
    y.head(k).setOnes();
    const auto fit = fit_glm(MatrixXd(n, 0), resp(y, kBinom));
    const double pk = double(k) / n;
    const double dev = -2.0 * (k * std::log(pk) + (n - k) * std::log(1.0 - pk));
    CHECK(fit.converged);
    CHECK(std::abs(fit.fitted_means[0] - pk) < 1e-10);
    CHECK(std::abs(fit.deviance - dev) < 1e-10);
  }
}

TEST_CASE("intercept-only poisson fits the sample mean") {
  VectorXd y(5);
  y << 0, 2, 3, 1, 4;
  const auto fit = fit_glm(MatrixXd(5, 0), resp(y, kPois));
  CHECK(std::abs(fit.fitted_means[0] - 2.0) < 1e-10);
}

TEST_CASE("gaussian IRLS equals the normal-equations oracle") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const Index n = 20 + rep, q = 1 + rep % 8;
    const MatrixXd z = oracle::random_matrix(rng, n, q);
    const VectorXd y = oracle::random_vector(rng, n) + z.rowwise().sum();
    const auto fit = fit_glm(z, resp(y, kGauss));
    const VectorXd ref = oracle::normal_equations(z, y);
    CHECK(fit.converged);
    CHECK((fit.coef - ref).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("logistic IRLS agrees with a long-double Newton oracle") {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 10) {
    const MatrixXd z = oracle::random_matrix(rng, 12, 2);
    const VectorXd y = oracle::logistic_response(rng, 0.5 * z.col(0) - 0.3 * z.col(1));
    const auto ref = oracle::newton_logistic(z, y);
    if (ref.coef.cwiseAbs().maxCoeff() > 15.0L || y.sum() < 2 || y.sum() > 10) continue;
    const auto fit = fit_glm(z, resp(y, kBinom));
    CHECK(fit.converged);
    CHECK(std::abs(fit.deviance - double(ref.deviance)) < 1e-6);
    for (Index j = 0; j < 3; ++j) CHECK(std::abs(fit.coef[j] - double(ref.coef[j])) < 1e-5);
    ++checked;
  }
}

TEST_CASE("converged fits solve the score equations") {
  std::mt19937_64 rng(8);
  for (auto fam : {kBinom, kPois}) {
    const MatrixXd z = oracle::random_matrix(rng, 60, 3);
    VectorXd y(60);
    const VectorXd eta = 0.4 * z.col(0) - 0.2 * z.col(2);
    std::poisson_distribution<int> pd;
    for (Index i = 0; i < 60; ++i)
      y[i] = fam == kBinom ? (std::uniform_real_distribution<>(0, 1)(rng) <
                                      1.0 / (1.0 + std::exp(-eta[i]))
                                  ? 1.0
                                  : 0.0)
                           : double(std::poisson_distribution<int>(std::exp(eta[i]))(rng));
    const auto fit = fit_glm(z, resp(y, fam));
    REQUIRE(fit.converged);
    // Canonical links: score = D'(y - m).
    MatrixXd d(60, 4);
    d.col(0).setOnes();
    d.rightCols(3) = z;
    const VectorXd score = d.transpose() * (y - fit.fitted_means);
    CHECK(score.cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("deviance is non-increasing over accepted iterations") {
  std::mt19937_64 rng(21);
  const MatrixXd z = oracle::random_matrix(rng, 40, 3);
  const VectorXd y = oracle::logistic_response(rng, z.col(0) + 0.5 * z.col(1));
  double prev = INFINITY;
  for (int iters = 1; iters <= 12; ++iters) {
    GlmOptions o;
    o.max_iter = iters;
    const auto fit = fit_glm(z, resp(y, kBinom), o);
    CHECK(fit.deviance <= prev * (1.0 + 1e-12));
    prev = fit.deviance;
  }
}

TEST_CASE("rescaling a regressor rescales its coefficient only") {
  std::mt19937_64 rng(4);
  const MatrixXd z = oracle::random_matrix(rng, 50, 3);
  const VectorXd y = oracle::logistic_response(rng, z.col(1) - z.col(2));
  const auto a = fit_glm(z, resp(y, kBinom));
  MatrixXd zs = z;
  zs.col(1) *= 7.5;
  const auto b = fit_glm(zs, resp(y, kBinom));
  CHECK(std::abs(b.coef[2] - a.coef[2] / 7.5) < 1e-8);
  CHECK(std::abs(b.deviance - a.deviance) < 1e-8);
}

TEST_CASE("covariance is symmetric positive semidefinite") {
  std::mt19937_64 rng(6);
  const MatrixXd z = oracle::random_matrix(rng, 30, 2);
  const VectorXd y = oracle::logistic_response(rng, z.col(0));
  const auto fit = fit_glm(z, resp(y, kBinom));
  CHECK((fit.cov - fit.cov.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(fit.cov);
  CHECK(es.eigenvalues().minCoeff() >= 0.0);
  CHECK(fit.deviance >= 0.0);
  CHECK(fit.pearson_chi2 >= 0.0);
}

TEST_CASE("rank-deficient designs are rejected") {
  MatrixXd z(6, 2);
  z << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10, 6, 12;
  VectorXd y(6);
  y << 0, 1, 0, 1, 1, 0;
  CHECK_THROWS_WITH_AS(fit_glm(z, resp(y, kBinom)), "singular IRLS system", NumericalError);
}

TEST_CASE("complete separation is reported, not thrown") {
  MatrixXd z(8, 1);
  z << -4, -3, -2, -1, 1, 2, 3, 4;
  VectorXd y(8);
  y << 0, 0, 0, 0, 1, 1, 1, 1;
  const auto fit = fit_glm(z, resp(y, kBinom));
  CHECK_FALSE(fit.converged);
  CHECK(fit.separated);
}

TEST_CASE("wald test") {
  GlmFit fit;
  fit.coef = VectorXd::Zero(2);
  fit.cov = MatrixXd::Identity(2, 2);
  auto w = wald_test(fit, 1);
  CHECK(w.z == 0.0);
  CHECK(w.p_value == doctest::Approx(1.0));

  fit.coef[1] = 1.96;
  w = wald_test(fit, 1);
  CHECK(w.p_value == doctest::Approx(0.05).epsilon(1e-3));
  fit.coef[1] = -1.96;
  CHECK(wald_test(fit, 1).p_value == w.p_value);

  fit.cov(1, 1) = 0.0;
  w = wald_test(fit, 1);
  CHECK(w.degenerate);
  CHECK(w.p_value == 1.0);
}

TEST_CASE("deviance and Pearson statistic") {
  VectorXd y(4);
  y << 0.5, 1.5, -2, 3;
  auto g = deviance_and_chi2(y, resp(y, kGauss));
  CHECK(g.deviance == 0.0);
  CHECK(g.pearson_chi2 == 0.0);

  VectorXd b(4);
  b << 0, 0, 1, 1;
  const auto fit = fit_glm(MatrixXd(4, 0), resp(b, kBinom));
  g = deviance_and_chi2(fit, resp(b, kBinom));
  CHECK(g.pearson_chi2 == doctest::Approx(4.0).epsilon(1e-12));

  VectorXd m(4);
  m << 0.0, 0.5, 1.0, 0.5;
  g = deviance_and_chi2(m, resp(b, kBinom));
  CHECK(g.clamped);
  CHECK(std::isfinite(g.deviance));
}
