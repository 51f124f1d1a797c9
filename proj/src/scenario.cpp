#include "scrn/scenario.hpp"

#include <cmath>
#include <string>

#include "scrn/error.hpp"

namespace scrn {

namespace {

int exact_count(double ratio, int n_wholesalers, const char* name) {
  const double count = ratio * n_wholesalers;
  const double rounded = std::round(count);
  if (!(ratio > 0.0) || std::abs(count - rounded) > 1e-9 || rounded < 1.0) {
    throw Error(ErrorKind::ConfigInvalid,
                std::string(name) + " * n_wholesalers must be a positive integer");
  }
  return static_cast<int>(rounded);
}

}  // namespace

std::string_view policy_token(HorizontalPolicy policy) {
  return policy == HorizontalPolicy::Coalition ? "coalition" : "pairs";
}

HorizontalPolicy parse_policy_token(std::string_view token) {
  if (token == "coalition") return HorizontalPolicy::Coalition;
  if (token == "pairs") return HorizontalPolicy::Pairs;
  throw Error(ErrorKind::ConfigInvalid, "unknown horizontal_policy '" + std::string(token) + "'");
}

std::string_view capacity_mode_token(CapacityMode mode) {
  return mode == CapacityMode::RealizedBalance ? "realized" : "theoretical";
}

CapacityMode parse_capacity_mode_token(std::string_view token) {
  if (token == "realized") return CapacityMode::RealizedBalance;
  if (token == "theoretical") return CapacityMode::TheoreticalMean;
  throw Error(ErrorKind::ConfigInvalid, "unknown capacity_mode '" + std::string(token) + "'");
}

TierSizes tier_sizes(const ScenarioConfig& config) {
  if (config.n_wholesalers < 1) {
    throw Error(ErrorKind::ConfigInvalid, "n_wholesalers must be at least 1");
  }
  TierSizes sizes;
  sizes.n_wholesalers = config.n_wholesalers;
  sizes.n_suppliers = exact_count(config.ratio_alpha, config.n_wholesalers, "ratio_alpha");
  sizes.n_retailers = exact_count(config.ratio_beta, config.n_wholesalers, "ratio_beta");
  return sizes;
}

ScenarioDegreeSpecs degree_specs(const ScenarioConfig& config) {
  const TierSizes sizes = tier_sizes(config);
  if (config.supplier_out_degree < 1) {
    throw Error(ErrorKind::ConfigInvalid, "supplier out-degree must be at least 1");
  }
  if (!(config.retailer_mean_in_degree >= 1.0)) {
    throw Error(ErrorKind::ConfigInvalid,
                "retailer_mean_in_degree must be at least 1 (zero truncation)");
  }
  const double k_s_out = config.supplier_out_degree;
  const double k_w_in = sizes.alpha() * k_s_out;
  const double k_r_in = config.retailer_mean_in_degree;
  const double k_w_out = sizes.beta() * k_r_in;

  ScenarioDegreeSpecs specs;
  specs.supplier_out = make_degree_spec(DegreeFamily::Regular, k_s_out);
  specs.wholesaler_in = make_degree_spec(config.wholesaler_dist, k_w_in, sizes.n_suppliers);
  specs.wholesaler_out = make_degree_spec(config.wholesaler_dist, k_w_out, sizes.n_retailers);
  specs.retailer_in = make_degree_spec(config.retailer_dist, k_r_in, sizes.n_wholesalers);
  return specs;
}

void validate(const ScenarioConfig& config) {
  if (!(config.rho >= 0.0 && config.rho <= 1.0)) {
    throw Error(ErrorKind::ConfigInvalid, "rho must lie in [0, 1]");
  }
  if (config.replications < 1) {
    throw Error(ErrorKind::ConfigInvalid, "replications must be at least 1");
  }
  if (!(config.gap_threshold >= 0.0)) {
    throw Error(ErrorKind::ConfigInvalid, "gap_threshold must be nonnegative");
  }
  if (config.repair_cap < 1 || config.rejection_cap < 1) {
    throw Error(ErrorKind::ConfigInvalid, "repair and rejection caps must be positive");
  }
  try {
    (void)degree_specs(config);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonBracketable) {
      throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    throw;
  }
}

}  // namespace scrn
