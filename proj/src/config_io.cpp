#include "scrn/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "scrn/error.hpp"

namespace scrn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(std::size_t line, std::string_view key, const std::string& why) {
  throw Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ", field '" + std::string(key) + "': " + why);
}

template <typename T>
T parse_number(std::string_view value, std::size_t line, std::string_view key) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) parse_fail(line, key, "not a valid number: '" + std::string(value) + "'");
  return out;
}

bool parse_bool(std::string_view value, std::size_t line, std::string_view key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  parse_fail(line, key, "expected true/false, got '" + std::string(value) + "'");
}

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<CellResult> sorted_rows(std::span<const CellResult> cells) {
  std::vector<CellResult> rows(cells.begin(), cells.end());
  const auto key = [](const CellResult& c) {
    return std::make_tuple(std::string_view(c.case_label), family_token(c.wholesaler_dist),
                           family_token(c.retailer_dist), c.retailer_mean, c.rho);
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const CellResult& a, const CellResult& b) { return key(a) < key(b); });
  return rows;
}

}  // namespace

ScenarioConfig parse_config_text(std::string_view text, const ScenarioConfig& defaults) {
  ScenarioConfig config = defaults;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(line_no, line, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) parse_fail(line_no, key, "missing value");

    try {
      if (key == "n_wholesalers") {
        config.n_wholesalers = parse_number<int>(value, line_no, key);
      } else if (key == "ratio_alpha") {
        config.ratio_alpha = parse_number<double>(value, line_no, key);
      } else if (key == "ratio_beta") {
        config.ratio_beta = parse_number<double>(value, line_no, key);
      } else if (key == "wholesaler_dist") {
        config.wholesaler_dist = parse_family_token(value);
      } else if (key == "retailer_dist") {
        config.retailer_dist = parse_family_token(value);
      } else if (key == "retailer_mean_in_degree") {
        config.retailer_mean_in_degree = parse_number<double>(value, line_no, key);
      } else if (key == "rho") {
        config.rho = parse_number<double>(value, line_no, key);
      } else if (key == "ordered") {
        config.ordered_matching = parse_bool(value, line_no, key);
      } else if (key == "coupled") {
        config.couple_degrees = parse_bool(value, line_no, key);
      } else if (key == "capacity_mode") {
        config.capacity_mode = parse_capacity_mode_token(value);
      } else if (key == "horizontal_policy") {
        config.horizontal_policy = parse_policy_token(value);
      } else if (key == "replications") {
        config.replications = parse_number<int>(value, line_no, key);
      } else if (key == "seed") {
        config.master_seed = parse_number<std::uint64_t>(value, line_no, key);
      } else if (key == "gap_threshold") {
        config.gap_threshold = parse_number<double>(value, line_no, key);
      } else {
        parse_fail(line_no, key, "unknown key");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigInvalid) parse_fail(line_no, key, e.what());
      throw;
    }
  }
  validate(config);
  return config;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string format_config(const ScenarioConfig& config) {
  std::ostringstream os;
  os << "n_wholesalers = " << config.n_wholesalers << '\n'
     << "ratio_alpha = " << fmt_g17(config.ratio_alpha) << '\n'
     << "ratio_beta = " << fmt_g17(config.ratio_beta) << '\n'
     << "wholesaler_dist = " << family_token(config.wholesaler_dist) << '\n'
     << "retailer_dist = " << family_token(config.retailer_dist) << '\n'
     << "retailer_mean_in_degree = " << fmt_g17(config.retailer_mean_in_degree) << '\n'
     << "rho = " << fmt_g17(config.rho) << '\n'
     << "ordered = " << (config.ordered_matching ? "true" : "false") << '\n'
     << "coupled = " << (config.couple_degrees ? "true" : "false") << '\n'
     << "capacity_mode = " << capacity_mode_token(config.capacity_mode) << '\n'
     << "horizontal_policy = " << policy_token(config.horizontal_policy) << '\n'
     << "replications = " << config.replications << '\n'
     << "seed = " << config.master_seed << '\n'
     << "gap_threshold = " << fmt_g17(config.gap_threshold) << '\n';
  return os.str();
}

OutputFormat parse_output_format(std::string_view token) {
  if (token == "csv") return OutputFormat::Csv;
  if (token == "json") return OutputFormat::Json;
  throw Error(ErrorKind::ConfigInvalid, "unknown output format '" + std::string(token) + "'");
}

void write_csv(std::ostream& out, std::span<const CellResult> cells) {
  out << kCsvHeader << '\n';
  for (const CellResult& c : sorted_rows(cells)) {
    out << c.case_label << ',' << family_token(c.wholesaler_dist) << ',' << family_token(c.retailer_dist)
        << ',' << fmt6(c.retailer_mean) << ',' << fmt6(c.rho) << ',' << fmt6(c.stats.mean_ofr) << ','
        << fmt6(c.stats.std_error) << ',' << c.stats.replications_used << ','
        << c.stats.rejected_samples << '\n';
  }
}

void write_json(std::ostream& out, const RunManifest& manifest, std::span<const CellResult> cells) {
  using nlohmann::ordered_json;
  const ScenarioConfig& c = manifest.config;
  ordered_json doc;
  doc["tool_version"] = manifest.tool_version;
  doc["command"] = manifest.command;
  doc["timestamp"] = manifest.timestamp;
  doc["master_seed"] = c.master_seed;
  doc["config_text"] = format_config(c);
  doc["config"] = {
      {"n_wholesalers", c.n_wholesalers},
      {"ratio_alpha", c.ratio_alpha},
      {"ratio_beta", c.ratio_beta},
      {"wholesaler_dist", family_token(c.wholesaler_dist)},
      {"retailer_dist", family_token(c.retailer_dist)},
      {"retailer_mean_in_degree", c.retailer_mean_in_degree},
      {"rho", c.rho},
      {"ordered", c.ordered_matching},
      {"coupled", c.couple_degrees},
      {"capacity_mode", capacity_mode_token(c.capacity_mode)},
      {"horizontal_policy", policy_token(c.horizontal_policy)},
      {"replications", c.replications},
      {"seed", c.master_seed},
      {"gap_threshold", c.gap_threshold},
  };
  ordered_json rows = ordered_json::array();
  for (const CellResult& cell : sorted_rows(cells)) {
    rows.push_back({
        {"case", cell.case_label},
        {"wholesaler_dist", family_token(cell.wholesaler_dist)},
        {"retailer_dist", family_token(cell.retailer_dist)},
        {"retailer_mean", cell.retailer_mean},
        {"rho", cell.rho},
        {"mean_ofr", cell.stats.mean_ofr},
        {"std_error", cell.stats.std_error},
        {"replications", cell.stats.replications_used},
        {"rejected", cell.stats.rejected_samples},
    });
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void emit_results(std::span<const CellResult> cells, OutputFormat format, const RunManifest& manifest,
                  const std::filesystem::path& out) {
  const auto write = [&](std::ostream& os) {
    if (format == OutputFormat::Csv) {
      write_csv(os, cells);
    } else {
      write_json(os, manifest, cells);
    }
  };
  if (out.empty() || out == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error(ErrorKind::IoError, "cannot open output file " + out.string());
  write(file);
  file.flush();
  if (!file) throw Error(ErrorKind::IoError, "failed writing " + out.string());
}

std::string current_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace scrn
