#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "scrn/experiment_harness.hpp"
#include "scrn/scenario.hpp"

namespace scrn {

/// Flat `key = value` scenario files. `#` starts a comment; blank lines are
/// ignored; missing keys keep their defaults. Recognized keys:
/// n_wholesalers, ratio_alpha, ratio_beta, wholesaler_dist, retailer_dist,
/// retailer_mean_in_degree, rho, ordered, coupled, capacity_mode,
/// horizontal_policy, replications, seed, gap_threshold.
ScenarioConfig parse_config_text(std::string_view text, const ScenarioConfig& defaults = {});
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Emits every recognized key; parse_config_text(format_config(c)) == c.
std::string format_config(const ScenarioConfig& config);

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(std::string_view token);

inline constexpr std::string_view kCsvHeader =
    "case,wholesaler_dist,retailer_dist,retailer_mean,rho,mean_ofr,std_error,replications,rejected";

/// Rows sorted by (case, wholesaler_dist, retailer_dist, retailer_mean, rho),
/// numbers with six decimals.
void write_csv(std::ostream& out, std::span<const CellResult> cells);

struct RunManifest {
  std::string tool_version;
  std::string command;
  ScenarioConfig config;
  std::string timestamp;
};

/// JSON manifest: version, command, config echo (flat text and fields),
/// seed, timestamp and the sorted rows.
void write_json(std::ostream& out, const RunManifest& manifest, std::span<const CellResult> cells);

void emit_results(std::span<const CellResult> cells, OutputFormat format, const RunManifest& manifest,
                  const std::filesystem::path& out);

/// UTC ISO-8601; honors SOURCE_DATE_EPOCH for reproducible manifests.
std::string current_timestamp();

}  // namespace scrn
