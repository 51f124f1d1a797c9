#include "scrn/degree_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scrn/error.hpp"

namespace scrn {

namespace {

constexpr int kBisectionIterations = 400;
constexpr double kIntegerTolerance = 1e-9;

// Bisection on a monotone function; `increasing` tells which side to keep.
template <typename F>
double bisect(F&& f, double target, double lo, double hi, bool increasing) {
  for (int i = 0; i < kBisectionIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool below = f(mid) < target;
    if (below == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string_view family_token(DegreeFamily family) {
  switch (family) {
    case DegreeFamily::Regular: return "reg";
    case DegreeFamily::ZeroTruncatedPoisson: return "poiss";
    case DegreeFamily::ZeroTruncatedPowerLaw: return "pow";
  }
  return "?";
}

DegreeFamily parse_family_token(std::string_view token) {
  if (token == "reg" || token == "regular") return DegreeFamily::Regular;
  if (token == "poiss" || token == "poisson") return DegreeFamily::ZeroTruncatedPoisson;
  if (token == "pow" || token == "powerlaw") return DegreeFamily::ZeroTruncatedPowerLaw;
  throw Error(ErrorKind::ConfigInvalid, "unknown degree family '" + std::string(token) + "'");
}

std::int64_t DegreeSequence::sum() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
}

double DegreeSequence::mean() const {
  if (degrees.empty()) throw Error(ErrorKind::EmptyInput, "mean of an empty degree sequence");
  return static_cast<double>(sum()) / static_cast<double>(degrees.size());
}

double ztp_mean(double lambda) { return lambda / -std::expm1(-lambda); }

double truncated_powerlaw_mean(double gamma, int support_cap) {
  double weighted = 0.0;
  double mass = 0.0;
  // Summed from the tail so the small terms are not swallowed.
  for (int k = support_cap; k >= 1; --k) {
    const double p = std::pow(static_cast<double>(k), -gamma);
    weighted += k * p;
    mass += p;
  }
  return weighted / mass;
}

double solve_ztp_lambda(double target_mean) {
  if (!(target_mean > 1.0) || !std::isfinite(target_mean)) {
    throw Error(ErrorKind::NonBracketable,
                "zero-truncated Poisson mean must exceed 1, got " + fmt_double(target_mean));
  }
  // ztp_mean(lambda) > lambda, so the root lies in (0, target_mean).
  return bisect([](double l) { return ztp_mean(l); }, target_mean, 0.0, target_mean, true);
}

double solve_powerlaw_gamma(double target_mean, int support_cap) {
  if (support_cap < 2) {
    throw Error(ErrorKind::NonBracketable, "power-law support cap must be at least 2");
  }
  const double mean_at_one = truncated_powerlaw_mean(1.0, support_cap);
  if (!(target_mean > 1.0) || !(target_mean < mean_at_one)) {
    throw Error(ErrorKind::NonBracketable,
                "power-law mean " + fmt_double(target_mean) + " not attainable with gamma > 1 on {1.." +
                    std::to_string(support_cap) + "}; range is (1, " + fmt_double(mean_at_one) + ")");
  }
  double hi = 2.0;
  while (truncated_powerlaw_mean(hi, support_cap) >= target_mean) {
    hi *= 2.0;
    if (hi > 1e4) throw Error(ErrorKind::NonBracketable, "power-law mean too close to 1");
  }
  return bisect([support_cap](double g) { return truncated_powerlaw_mean(g, support_cap); },
                target_mean, 1.0, hi, false);
}

DegreeDistributionSpec make_degree_spec(DegreeFamily family, double target_mean, int support_cap) {
  if (!(target_mean >= 1.0)) {
    throw Error(ErrorKind::ConfigInvalid,
                "mean degree must be at least 1 (zero truncation), got " + fmt_double(target_mean));
  }
  DegreeDistributionSpec spec;
  spec.family = family;
  spec.target_mean = target_mean;
  switch (family) {
    case DegreeFamily::Regular:
      if (std::abs(target_mean - std::round(target_mean)) > kIntegerTolerance) {
        throw Error(ErrorKind::ConfigInvalid,
                    "regular degree distribution needs an integer mean, got " + fmt_double(target_mean));
      }
      spec.target_mean = std::round(target_mean);
      break;
    case DegreeFamily::ZeroTruncatedPoisson:
      spec.param = solve_ztp_lambda(target_mean);
      break;
    case DegreeFamily::ZeroTruncatedPowerLaw:
      spec.support_cap = support_cap;
      spec.param = solve_powerlaw_gamma(target_mean, support_cap);
      break;
  }
  return spec;
}

double analytic_mean(const DegreeDistributionSpec& spec) {
  switch (spec.family) {
    case DegreeFamily::Regular: return spec.target_mean;
    case DegreeFamily::ZeroTruncatedPoisson: return ztp_mean(spec.param);
    case DegreeFamily::ZeroTruncatedPowerLaw:
      return truncated_powerlaw_mean(spec.param, spec.support_cap);
  }
  return 0.0;
}

DegreeSampler::DegreeSampler(const DegreeDistributionSpec& spec) : spec_(spec) {
  switch (spec.family) {
    case DegreeFamily::Regular:
      regular_degree_ = static_cast<int>(std::lround(spec.target_mean));
      break;
    case DegreeFamily::ZeroTruncatedPoisson:
      if (!(spec.param > 0.0)) throw Error(ErrorKind::ConfigInvalid, "unsolved Poisson spec");
      break;
    case DegreeFamily::ZeroTruncatedPowerLaw: {
      if (spec.support_cap < 2 || !(spec.param > 1.0)) {
        throw Error(ErrorKind::ConfigInvalid, "unsolved power-law spec");
      }
      std::vector<double> pmf(static_cast<std::size_t>(spec.support_cap));
      for (int k = 1; k <= spec.support_cap; ++k) {
        pmf[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), -spec.param);
      }
      const double mass = std::accumulate(pmf.rbegin(), pmf.rend(), 0.0);
      cdf_.resize(pmf.size());
      double running = 0.0;
      for (std::size_t i = 0; i < pmf.size(); ++i) {
        running += pmf[i] / mass;
        cdf_[i] = running;
      }
      cdf_.back() = 1.0;
      break;
    }
  }
}

int DegreeSampler::operator()(Rng& rng) const {
  switch (spec_.family) {
    case DegreeFamily::Regular:
      return regular_degree_;
    case DegreeFamily::ZeroTruncatedPoisson: {
      std::poisson_distribution<int> poisson(spec_.param);
      for (int attempt = 0; attempt < kZtpRejectionCap; ++attempt) {
        const int k = poisson(rng);
        if (k > 0) return k;
      }
      throw Error(ErrorKind::InternalSamplingFailure, "zero-truncated Poisson rejection cap hit");
    }
    case DegreeFamily::ZeroTruncatedPowerLaw: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double u = unit(rng);
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      const auto index = std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                  static_cast<std::ptrdiff_t>(cdf_.size()) - 1);
      return static_cast<int>(index) + 1;
    }
  }
  throw Error(ErrorKind::InternalSamplingFailure, "unknown degree family");
}

DegreeSequence sample_degree_sequence(const DegreeSampler& sampler, std::size_t n, DegreeRole role,
                                      Rng& rng) {
  DegreeSequence seq;
  seq.role = role;
  seq.degrees.resize(n);
  for (auto& d : seq.degrees) d = sampler(rng);
  return seq;
}

DegreeSequence sample_degree_sequence(const DegreeDistributionSpec& spec, std::size_t n,
                                      DegreeRole role, Rng& rng) {
  return sample_degree_sequence(DegreeSampler(spec), n, role, rng);
}

}  // namespace scrn
