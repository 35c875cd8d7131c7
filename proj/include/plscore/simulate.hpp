#pragma once

#include <cstdint>

#include "plscore/masked_matrix.hpp"

namespace plscore {

struct SimulatedData {
  MaskedMatrix x;
  Response y;
  VectorXd true_beta;
};

/// Synthetic dataset: predictors share one latent factor (moderate
/// collinearity), the response follows the family with linear predictor
/// X * true_beta, and cells are masked i.i.d. with rate `missing_frac`.
/// Deterministic for a fixed seed.
SimulatedData simulate(Index n, Index p, Family family, double missing_frac,
                       std::uint64_t seed);

}  // namespace plscore
