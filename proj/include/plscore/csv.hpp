#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "plscore/masked_matrix.hpp"

namespace plscore {

/// Raw RFC-4180 table: header plus string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);
/// Strict full-field number parse; returns false on any trailing garbage.
bool parse_double(std::string_view s, double& out);

struct LoadOptions {
  std::set<std::string> na_tokens{"NA", "", "NaN"};
  std::string response_col;
  Family family;
  /// Optional column holding positive observation weights.
  std::string weights_col;
};

struct Dataset {
  MaskedMatrix x;
  Response y;
};

/// Loads predictors and a fully observed response. A header whose first
/// cell is empty marks the first column as row identifiers (R write.csv
/// convention). Every other non-response column is a numeric predictor.
Dataset load_csv(const std::filesystem::path& path, const LoadOptions& opts);
Dataset load_csv_text(std::string_view text, const LoadOptions& opts);

/// Writes row ids, predictors (masked cells as "NA") and the response as the
/// last column; weights are written when `weights_col` is non-empty.
void save_csv(const std::filesystem::path& path, const MaskedMatrix& x,
              const Response& y, const std::string& response_col,
              const std::string& weights_col = {});
void save_csv(std::ostream& out, const MaskedMatrix& x, const Response& y,
              const std::string& response_col, const std::string& weights_col = {});

}  // namespace plscore
