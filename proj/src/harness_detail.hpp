#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "landau/config.hpp"
#include "landau/harness.hpp"

namespace landau::detail {

/// Writes `j` to output_dir/relative and lists it in the manifest.
void write_json(const std::filesystem::path& output_dir, const std::string& relative, const nlohmann::json& j,
                SummaryReport& report);

/// Items 1 and 2.
void validate_kernel(const ExperimentConfig& config, SummaryReport& report);

/// Items 4, 5 and 11, plus the ungated Sobolev and full-interpolation tables.
void check_inequalities(const ExperimentConfig& config, SummaryReport& report);

/// Ratio of the largest to the smallest entry; +inf when the smallest is not
/// positive.
double variation(const std::vector<double>& v);

}  // namespace landau::detail
