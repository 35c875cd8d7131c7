#include "plscore/masked_matrix.hpp"

#include <cmath>
#include <limits>

#include "plscore/error.hpp"

namespace plscore {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string column_label(const MaskedMatrix& x, Index j) {
  if (j < static_cast<Index>(x.col_names.size())) return x.col_names[j];
  return std::to_string(j);
}

std::string row_label(const MaskedMatrix& x, Index i) {
  if (i < static_cast<Index>(x.row_ids.size())) return x.row_ids[i];
  return std::to_string(i + 1);
}

// Returns an empty string when the invariants hold.
std::string invariant_violation(const MaskedMatrix& x) {
  if (x.mask.rows() != x.values.rows() || x.mask.cols() != x.values.cols())
    return "mask and values dimensions differ";
  if (static_cast<Index>(x.col_names.size()) != x.cols())
    return "column name count does not match column count";
  if (static_cast<Index>(x.row_ids.size()) != x.rows())
    return "row id count does not match row count";
  for (Index i = 0; i < x.rows(); ++i)
    if (!x.mask.row(i).any())
      return "row '" + row_label(x, i) + "' has no present predictor";
  for (Index j = 0; j < x.cols(); ++j) {
    Index count = 0;
    bool distinct = false;
    double first = 0.0;
    for (Index i = 0; i < x.rows(); ++i) {
      if (!x.mask(i, j)) continue;
      if (count == 0) first = x.values(i, j);
      else if (x.values(i, j) != first) distinct = true;
      ++count;
    }
    if (count < 2)
      return "column '" + column_label(x, j) + "' has fewer than 2 present entries";
    if (!distinct) return "constant column '" + column_label(x, j) + "'";
  }
  return {};
}

}  // namespace

std::vector<std::string> default_col_names(Index p) {
  std::vector<std::string> names;
  names.reserve(p);
  for (Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

std::vector<std::string> default_row_ids(Index n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i + 1));
  return ids;
}

MaskedMatrix MaskedMatrix::dense(const MatrixXd& values) {
  MaskedMatrix m;
  m.values = values;
  m.mask = Mask::Constant(values.rows(), values.cols(), true);
  m.col_names = default_col_names(values.cols());
  m.row_ids = default_row_ids(values.rows());
  return m;
}

MaskedMatrix MaskedMatrix::from_mask(MatrixXd values, Mask mask) {
  MaskedMatrix m;
  m.values = std::move(values);
  m.mask = std::move(mask);
  m.values = m.mask.select(m.values.array(), kNaN).matrix();
  m.col_names = default_col_names(m.values.cols());
  m.row_ids = default_row_ids(m.values.rows());
  return m;
}

void validate(const MaskedMatrix& x) {
  if (auto why = invariant_violation(x); !why.empty()) throw DataError(why);
}

bool satisfies_invariants(const MaskedMatrix& x) {
  return invariant_violation(x).empty();
}

MaskedMatrix subset_rows(const MaskedMatrix& x, std::span<const Index> rows) {
  MaskedMatrix out;
  const auto n = static_cast<Index>(rows.size());
  out.values.resize(n, x.cols());
  out.mask.resize(n, x.cols());
  out.row_ids.reserve(n);
  for (Index r = 0; r < n; ++r) {
    out.values.row(r) = x.values.row(rows[r]);
    out.mask.row(r) = x.mask.row(rows[r]);
    out.row_ids.push_back(x.row_ids.empty() ? std::to_string(rows[r] + 1)
                                            : x.row_ids[rows[r]]);
  }
  out.col_names = x.col_names;
  return out;
}

Response Response::make(VectorXd y, Family family) {
  const Index n = y.size();
  return make(std::move(y), family, VectorXd::Ones(n));
}

Response Response::make(VectorXd y, Family family, VectorXd weights) {
  Response r{std::move(y), family, std::move(weights)};
  validate(r);
  return r;
}

void validate(const Response& r) {
  if (r.weights.size() != r.y.size())
    throw DataError("weight count does not match response length");
  for (Index i = 0; i < r.y.size(); ++i) {
    if (!r.family.valid_response(r.y[i]))
      throw DataError("invalid " + std::string(r.family.name()) +
                      " response at row " + std::to_string(i + 1));
    if (!(r.weights[i] > 0.0) || !std::isfinite(r.weights[i]))
      throw DataError("non-positive weight at row " + std::to_string(i + 1));
  }
}

Response subset_rows(const Response& r, std::span<const Index> rows) {
  Response out;
  out.family = r.family;
  out.y.resize(static_cast<Index>(rows.size()));
  out.weights.resize(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.y[k] = r.y[rows[k]];
    out.weights[k] = r.weights[rows[k]];
  }
  return out;
}

std::pair<MaskedMatrix, ScalingRecord> standardize(const MaskedMatrix& x) {
  return standardize(x, VectorXd::Ones(x.rows()));
}

std::pair<MaskedMatrix, ScalingRecord> standardize(const MaskedMatrix& x,
                                                   const VectorXd& weights) {
  const Index p = x.cols();
  ScalingRecord rec;
  rec.col_means.resize(p);
  rec.col_sds.resize(p);
  for (Index j = 0; j < p; ++j) {
    double sw = 0.0, swx = 0.0;
    for (Index i = 0; i < x.rows(); ++i) {
      if (!x.mask(i, j)) continue;
      sw += weights[i];
      swx += weights[i] * x.values(i, j);
    }
    const double mean = swx / sw;
    double ss = 0.0;
    for (Index i = 0; i < x.rows(); ++i) {
      if (!x.mask(i, j)) continue;
      const double d = x.values(i, j) - mean;
      ss += weights[i] * d * d;
    }
    const double sd = std::sqrt(ss / (sw - 1.0));
    if (!(sw > 1.0) || !(sd > 0.0) || !std::isfinite(sd))
      throw DataError("zero standard deviation in column '" + column_label(x, j) + "'");
    rec.col_means[j] = mean;
    rec.col_sds[j] = sd;
  }
  return {apply_scaling(x, rec), rec};
}

MaskedMatrix apply_scaling(const MaskedMatrix& x, const ScalingRecord& rec) {
  if (rec.col_means.size() != x.cols())
    throw DataError("scaling record does not match column count");
  MaskedMatrix out = x;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i)
      if (x.mask(i, j))
        out.values(i, j) = (x.values(i, j) - rec.col_means[j]) / rec.col_sds[j];
  return out;
}

}  // namespace plscore
