#pragma once

// Missing-data aware NIPALS kernels. Every sum runs over the entries present
// in the mask (pairwise-available); with a full mask each kernel reduces to
// its dense counterpart.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "plscore/error.hpp"
#include "plscore/masked_matrix.hpp"

namespace plscore {

/// Below this norm a weight vector or score is declared degenerate.
inline constexpr double kDegenerateTolerance = 1e-12;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Per-column regression slope of x_j on u over rows where x_j is present,
///   w_j = sum_i o_i x_ij u_i / sum_i o_i u_i^2,
/// normalized to unit length.
template <class DX, class DU, class DO>
Vec<typename DX::Scalar> nipals_weights(const Eigen::MatrixBase<DX>& values,
                                        const Mask& mask,
                                        const Eigen::MatrixBase<DU>& u,
                                        const Eigen::MatrixBase<DO>& obs_weights) {
  using Scalar = typename DX::Scalar;
  const Index p = values.cols();
  Vec<Scalar> w(p);
  for (Index j = 0; j < p; ++j) {
    Scalar num(0), den(0);
    for (Index i = 0; i < values.rows(); ++i) {
      if (!mask(i, j)) continue;
      num += obs_weights(i) * values(i, j) * u(i);
      den += obs_weights(i) * u(i) * u(i);
    }
    if (!(den > Scalar(0)))
      throw DegenerateComponent("degenerate component: column " + std::to_string(j) +
                                    " shares no support with the response",
                                0);
    w(j) = num / den;
  }
  const Scalar norm = w.norm();
  if (!(norm >= Scalar(kDegenerateTolerance)))
    throw DegenerateComponent("degenerate component", 0);
  return w / norm;
}

/// Score of each row as the no-intercept slope of its present entries on the
/// matching weight entries: t_i = sum_j w_j x_ij / sum_j w_j^2.
template <class DX, class DW>
Vec<typename DX::Scalar> compute_scores(const Eigen::MatrixBase<DX>& values,
                                        const Mask& mask,
                                        const Eigen::MatrixBase<DW>& w) {
  using Scalar = typename DX::Scalar;
  const Index n = values.rows();
  Vec<Scalar> t(n);
  for (Index i = 0; i < n; ++i) {
    Scalar num(0), den(0);
    for (Index j = 0; j < values.cols(); ++j) {
      if (!mask(i, j)) continue;
      num += w(j) * values(i, j);
      den += w(j) * w(j);
    }
    if (!(den > Scalar(0)))
      throw NumericalError("row " + std::to_string(i + 1) +
                           " has no present entry with non-zero weight");
    t(i) = num / den;
  }
  return t;
}

/// Loadings p_j = sum_i o_i x_ij t_i / sum_i o_i t_i^2 over present entries,
/// then x_ij -= t_i p_j on present entries. Masked cells are left untouched.
template <class DX, class DT, class DO>
Vec<typename DX::Scalar> deflate_inplace(Eigen::MatrixBase<DX>& values,
                                         const Mask& mask,
                                         const Eigen::MatrixBase<DT>& t,
                                         const Eigen::MatrixBase<DO>& obs_weights) {
  using Scalar = typename DX::Scalar;
  const Index p = values.cols();
  Vec<Scalar> load(p);
  for (Index j = 0; j < p; ++j) {
    Scalar num(0), den(0);
    for (Index i = 0; i < values.rows(); ++i) {
      if (!mask(i, j)) continue;
      num += obs_weights(i) * values(i, j) * t(i);
      den += obs_weights(i) * t(i) * t(i);
    }
    load(j) = den > Scalar(0) ? num / den : Scalar(0);
    for (Index i = 0; i < values.rows(); ++i)
      if (mask(i, j)) values(i, j) -= t(i) * load(j);
  }
  return load;
}

inline VectorXd nipals_weights(const MaskedMatrix& xres, const VectorXd& u,
                               const VectorXd& obs_weights) {
  return nipals_weights(xres.values, xres.mask, u, obs_weights);
}

inline VectorXd compute_scores(const MaskedMatrix& xres, const VectorXd& w) {
  return compute_scores(xres.values, xres.mask, w);
}

/// Returns the deflated matrix and the loadings.
inline std::pair<MaskedMatrix, VectorXd> deflate(const MaskedMatrix& xres,
                                                 const VectorXd& t,
                                                 const VectorXd& obs_weights) {
  MaskedMatrix next = xres;
  VectorXd load = deflate_inplace(next.values, next.mask, t, obs_weights);
  return {std::move(next), std::move(load)};
}

/// Orients w so its largest-magnitude entry is positive (ties: lowest
/// index). Returns -1 when the vector was flipped, +1 otherwise.
template <class D>
int orient_weights(Eigen::MatrixBase<D>& w) {
  Index best = 0;
  for (Index j = 1; j < w.size(); ++j)
    if (std::abs(w(j)) > std::abs(w(best))) best = j;
  if (w.size() > 0 && w(best) < 0) {
    w = -w;
    return -1;
  }
  return 1;
}

}  // namespace plscore
