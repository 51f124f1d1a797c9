#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace scrn {

/// Random stream used throughout the simulator. Every replication owns one.
using Rng = std::mt19937_64;

enum class DegreeFamily { Regular, ZeroTruncatedPoisson, ZeroTruncatedPowerLaw };

/// Short token used in config files and result tables: reg, poiss, pow.
std::string_view family_token(DegreeFamily family);
DegreeFamily parse_family_token(std::string_view token);

enum class DegreeRole { SupplierOut, WholesalerIn, WholesalerOut, RetailerIn };

struct DegreeDistributionSpec {
  DegreeFamily family = DegreeFamily::Regular;
  double target_mean = 1.0;
  // lambda for ZTP, exponent gamma for the power law, unused for Regular.
  double param = 0.0;
  // k_max, power law only.
  int support_cap = 0;
};

struct DegreeSequence {
  std::vector<int> degrees;
  DegreeRole role = DegreeRole::SupplierOut;

  std::size_t size() const { return degrees.size(); }
  std::int64_t sum() const;
  double mean() const;
};

/// Mean of a zero-truncated Poisson: lambda / (1 - exp(-lambda)).
double ztp_mean(double lambda);

/// Mean of p(k) ~ k^-gamma on {1..support_cap}.
double truncated_powerlaw_mean(double gamma, int support_cap);

/// Solves lambda / (1 - exp(-lambda)) = target_mean by bisection.
/// Throws NonBracketable when target_mean <= 1.
double solve_ztp_lambda(double target_mean);

/// Solves the truncated power-law mean equation for gamma > 1 by bisection.
/// The attainable means for gamma > 1 lie strictly between 1 and the mean at
/// gamma = 1; anything outside throws NonBracketable.
double solve_powerlaw_gamma(double target_mean, int support_cap);

/// Validates the spec and fills in `param`. Regular requires an integer mean.
DegreeDistributionSpec make_degree_spec(DegreeFamily family, double target_mean,
                                        int support_cap = 0);

/// Analytic mean of a solved spec.
double analytic_mean(const DegreeDistributionSpec& spec);

/// Draws single degrees from a solved spec. Construction precomputes the
/// inverse-CDF table for the power law, so build once and reuse.
class DegreeSampler {
 public:
  explicit DegreeSampler(const DegreeDistributionSpec& spec);

  int operator()(Rng& rng) const;

  const DegreeDistributionSpec& spec() const { return spec_; }
  /// Cumulative probabilities for k = 1..k_max (power law only; empty otherwise).
  const std::vector<double>& cdf() const { return cdf_; }

 private:
  DegreeDistributionSpec spec_;
  std::vector<double> cdf_;
  int regular_degree_ = 0;
};

inline constexpr int kZtpRejectionCap = 1'000'000;

DegreeSequence sample_degree_sequence(const DegreeSampler& sampler, std::size_t n,
                                      DegreeRole role, Rng& rng);
DegreeSequence sample_degree_sequence(const DegreeDistributionSpec& spec, std::size_t n,
                                      DegreeRole role, Rng& rng);

}  // namespace scrn
