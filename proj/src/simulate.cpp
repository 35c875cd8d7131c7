#include "plscore/simulate.hpp"

#include <cmath>
#include <random>

#include "plscore/error.hpp"
#include "plscore/rng.hpp"

namespace plscore {

namespace {

constexpr int kMaskRetries = 200;

bool column_ok(const MatrixXd& v, const Mask& m, Index j) {
  Index count = 0;
  bool distinct = false;
  double first = 0.0;
  for (Index i = 0; i < v.rows(); ++i) {
    if (!m(i, j)) continue;
    if (count++ == 0) first = v(i, j);
    else if (v(i, j) != first) distinct = true;
  }
  return count >= 2 && distinct;
}

}  // namespace

SimulatedData simulate(Index n, Index p, Family family, double missing_frac,
                       std::uint64_t seed) {
  if (n < 2 || p < 1) throw ConfigError("simulate needs n >= 2 and p >= 1");
  if (!(missing_frac >= 0.0 && missing_frac < 1.0))
    throw ConfigError("missing fraction must lie in [0, 1)");

  Rng value_rng = make_rng(seed, {1});
  std::normal_distribution<double> normal;

  MatrixXd values(n, p);
  for (Index i = 0; i < n; ++i) {
    const double factor = normal(value_rng);
    for (Index j = 0; j < p; ++j)
      values(i, j) = 0.5 * factor + std::sqrt(0.75) * normal(value_rng);
  }
  VectorXd beta(p);
  for (Index j = 0; j < p; ++j) beta[j] = normal(value_rng) / std::sqrt(double(p));

  const VectorXd eta = values * beta;
  VectorXd y(n);
  for (Index i = 0; i < n; ++i) {
    switch (family.kind()) {
      case Family::Kind::gaussian: y[i] = eta[i] + normal(value_rng); break;
      case Family::Kind::binomial: {
        std::bernoulli_distribution draw(family.inv_link(eta[i]));
        y[i] = draw(value_rng) ? 1.0 : 0.0;
        break;
      }
      case Family::Kind::poisson: {
        std::poisson_distribution<long> draw(family.inv_link(eta[i]));
        y[i] = static_cast<double>(draw(value_rng));
        break;
      }
    }
  }

  Rng mask_rng = make_rng(seed, {2});
  std::bernoulli_distribution missing(missing_frac);
  Mask mask(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) mask(i, j) = !missing(mask_rng);

  // Redraw rows and columns that break the dataset invariants.
  for (int round = 0;; ++round) {
    bool clean = true;
    for (Index i = 0; i < n; ++i) {
      if (mask.row(i).any()) continue;
      clean = false;
      for (Index j = 0; j < p; ++j) mask(i, j) = !missing(mask_rng);
    }
    for (Index j = 0; j < p; ++j) {
      if (column_ok(values, mask, j)) continue;
      clean = false;
      for (Index i = 0; i < n; ++i) mask(i, j) = !missing(mask_rng);
    }
    if (clean) break;
    if (round == kMaskRetries)
      throw DataError("infeasible missing fraction: mask invariants unsatisfiable");
  }

  SimulatedData out;
  out.x = MaskedMatrix::from_mask(std::move(values), std::move(mask));
  out.y = Response::make(std::move(y), family);
  out.true_beta = std::move(beta);
  return out;
}

}  // namespace plscore
