#pragma once

#include <json.hpp>

#include "plscore/bootstrap.hpp"
#include "plscore/csv.hpp"
#include "plscore/selection.hpp"

namespace plscore {

using nlohmann::json;

/// Model file: components, coefficients and scaling of a fit.
json model_json(const PlsGlrFit& fit);

/// One row per H; columns follow the cross-validation table labels.
CsvTable criteria_csv(const CriteriaTable& table);
json criteria_json(const CriteriaTable& table);

CsvTable votes_csv(const VoteDistribution& votes);
CsvTable cv_records_csv(const CvResult& cv);

CsvTable beta_star_csv(const BootReport& rep);
/// predictor, estimate, then lower/upper/significant per interval type.
CsvTable ci_csv(const BootReport& rep);
json boot_json(const BootReport& rep);

CsvTable stability_csv(const StabilityTable& st);
json stability_json(const StabilityTable& st);

// Figure payloads consumed by emit_svg.
json votes_payload(const VoteDistribution& votes);
json boxplot_payload(const BootReport& rep);
json ci_forest_payload(const BootReport& rep, CiType type);
json sig_grid_payload(const StabilityTable& st);
json biplot_payload(const BiplotData& b);

}  // namespace plscore
