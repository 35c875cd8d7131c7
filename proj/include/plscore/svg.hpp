#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

namespace plscore {

enum class SvgKind { cv_votes, boxplots, ci_forest, sig_grid, biplot };

SvgKind parse_svg_kind(std::string_view name);

/// Renders a standalone SVG 1.1 document. Output is a pure function of the
/// payload: numbers are printed with 6 significant digits and nothing
/// time-dependent is embedded. Throws DataError when the payload does not
/// match the kind's schema.
std::string emit_svg(SvgKind kind, const nlohmann::json& payload);

}  // namespace plscore
