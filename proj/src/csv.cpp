#include "plscore/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "plscore/error.hpp"

namespace plscore {

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  // Skip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (in_quotes) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          throw DataError("malformed CSV: stray quote");
        in_quotes = true;
        field_started = true;
        break;
      case ',': end_field(); break;
      case '\r':
        if (k + 1 < text.size() && text[k + 1] == '\n') ++k;
        end_record();
        break;
      case '\n': end_record(); break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("malformed CSV: unterminated quote");
  if (field_started || !field.empty() || !record.empty()) end_record();

  CsvTable table;
  if (records.empty()) throw DataError("CSV has no header row");
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() == 1 && records[r][0].empty()) continue;  // blank line
    if (records[r].size() != table.header.size())
      throw DataError("CSV row " + std::to_string(r) + " has " +
                      std::to_string(records[r].size()) + " fields, expected " +
                      std::to_string(table.header.size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

namespace {

void write_field(std::ostream& out, const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) {
    out << f;
    return;
  }
  out << '"';
  for (char c : f) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void write_record(std::ostream& out, const std::vector<std::string>& rec) {
  for (std::size_t k = 0; k < rec.size(); ++k) {
    if (k) out << ',';
    write_field(out, rec[k]);
  }
  out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  write_record(out, table.header);
  for (const auto& r : table.rows) write_record(out, r);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_csv(out, table);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

namespace {

Dataset build_dataset(const CsvTable& table, const LoadOptions& opts) {
  const auto& header = table.header;
  const bool has_ids = !header.empty() && header.front().empty();
  const auto find = [&](const std::string& name) -> std::ptrdiff_t {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto resp = find(opts.response_col);
  if (opts.response_col.empty() || resp < 0)
    throw DataError("response column '" + opts.response_col + "' not found");
  std::ptrdiff_t wcol = -1;
  if (!opts.weights_col.empty()) {
    wcol = find(opts.weights_col);
    if (wcol < 0) throw DataError("weights column '" + opts.weights_col + "' not found");
  }

  std::vector<std::size_t> pred_cols;
  for (std::size_t c = has_ids ? 1 : 0; c < header.size(); ++c)
    if (static_cast<std::ptrdiff_t>(c) != resp && static_cast<std::ptrdiff_t>(c) != wcol)
      pred_cols.push_back(c);

  const auto n = static_cast<Index>(table.rows.size());
  const auto p = static_cast<Index>(pred_cols.size());
  if (n == 0) throw DataError("CSV has no data rows");
  if (p == 0) throw DataError("CSV has no predictor columns");

  Dataset ds;
  ds.x.values.resize(n, p);
  ds.x.mask.resize(n, p);
  VectorXd y(n), w = VectorXd::Ones(n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    ds.x.row_ids.push_back(has_ids ? row[0] : std::to_string(i + 1));
    const std::string& ycell = row[resp];
    if (opts.na_tokens.count(ycell))
      throw DataError("missing response value in row '" + ds.x.row_ids.back() + "'");
    if (!parse_double(ycell, y[i]))
      throw DataError("non-numeric response '" + ycell + "' in row '" +
                      ds.x.row_ids.back() + "'");
    if (wcol >= 0 && !parse_double(row[wcol], w[i]))
      throw DataError("invalid weight in row '" + ds.x.row_ids.back() + "'");
    for (Index j = 0; j < p; ++j) {
      const std::string& cell = row[pred_cols[j]];
      if (opts.na_tokens.count(cell)) {
        ds.x.mask(i, j) = false;
        ds.x.values(i, j) = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double v;
      if (!parse_double(cell, v) || !std::isfinite(v))
        throw DataError("non-numeric value '" + cell + "' in column '" +
                        header[pred_cols[j]] + "', row '" + ds.x.row_ids.back() + "'");
      ds.x.mask(i, j) = true;
      ds.x.values(i, j) = v;
    }
  }
  for (auto c : pred_cols) ds.x.col_names.push_back(header[c]);
  validate(ds.x);
  ds.y = Response{std::move(y), opts.family, std::move(w)};
  validate(ds.y);
  return ds;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& opts) {
  return build_dataset(read_csv(path), opts);
}

Dataset load_csv_text(std::string_view text, const LoadOptions& opts) {
  return build_dataset(parse_csv(text), opts);
}

void save_csv(const std::filesystem::path& path, const MaskedMatrix& x,
              const Response& y, const std::string& response_col,
              const std::string& weights_col) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  save_csv(out, x, y, response_col, weights_col);
}

void save_csv(std::ostream& out, const MaskedMatrix& x, const Response& y,
              const std::string& response_col, const std::string& weights_col) {
  CsvTable t;
  t.header.push_back("");
  t.header.insert(t.header.end(), x.col_names.begin(), x.col_names.end());
  t.header.push_back(response_col);
  if (!weights_col.empty()) t.header.push_back(weights_col);
  for (Index i = 0; i < x.rows(); ++i) {
    std::vector<std::string> rec;
    rec.push_back(i < static_cast<Index>(x.row_ids.size()) ? x.row_ids[i]
                                                           : std::to_string(i + 1));
    for (Index j = 0; j < x.cols(); ++j)
      rec.push_back(x.mask(i, j) ? format_double(x.values(i, j)) : "NA");
    rec.push_back(format_double(y.y[i]));
    if (!weights_col.empty()) rec.push_back(format_double(y.weights[i]));
    t.rows.push_back(std::move(rec));
  }
  write_csv(out, t);
}

}  // namespace plscore
