#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mixkit/couplings.hpp"
#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"

namespace mixkit {

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov: sup-norm distance between the empirical CDF of the
// samples and the model CDF.

inline double ks_statistic(std::vector<double> samples, const DistributionSpec& d) {
  if (samples.empty()) throw DomainError("ks_statistic: need at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(d, samples[i]);
    stat = std::max(stat, std::max(f - static_cast<double>(i) / n,
                                   static_cast<double>(i + 1) / n - f));
  }
  return stat;
}

// 5% critical value of the one-sample KS statistic (asymptotic). A correct
// sampler trips this ~5% of the time per marginal; it is a reference rate,
// not a gate.
inline double ks_critical_5pct(std::size_t n) {
  return 1.36 / std::sqrt(static_cast<double>(n));
}

// Pass/fail gate for verification: 0.006 at n = 1e5, scaled as c/sqrt(n).
// Roughly the 0.1% level, so it only fires on genuine distribution errors.
inline double ks_gate(std::size_t n) {
  return 0.006 * std::sqrt(1e5 / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// phi-constancy of a constructed mix.

struct ConstancyReport {
  double center = 0.0;            // declared constant
  double max_deviation = 0.0;     // max |phi(x) - center| over the draws
  double tolerance = 0.0;         // 1e-8 * (1 + |center|)
  bool pass = false;
  std::size_t n = 0;
  // Sign-switch diagnostics (signed weighted sum support and branch balance).
  std::optional<double> support_lo, support_hi;
  std::optional<double> plus_fraction;
};

inline ConstancyReport constancy_check(const Construction& c, std::size_t n,
                                       std::uint64_t seed) {
  if (n < 1) throw DomainError("constancy_check: need n >= 1");
  if (!c.center.is_point())
    throw UnsupportedError("constancy_check: construction has no point center");
  ConstancyReport report;
  report.center = c.center.value();
  report.tolerance = 1e-8 * (1.0 + std::abs(report.center));
  report.n = n;

  const bool switch_like = c.inner_abs;
  double lo = 0.0, hi = 0.0;
  std::size_t plus = 0;

  MixSampler sampler(c, seed);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = sampler.draw();
    const double v = c.phi(row);
    report.max_deviation = std::max(report.max_deviation, std::abs(v - report.center));
    if (switch_like) {
      const double s = c.phi.signed_inner(row);
      if (k == 0) {
        lo = hi = s;
      } else {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      if (s > 0.0) ++plus;
    }
  }
  if (switch_like) {
    report.support_lo = lo;
    report.support_hi = hi;
    report.plus_fraction = static_cast<double>(plus) / static_cast<double>(n);
  }
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Moment identity: sample variance against -2 psi'(0) sigma^2.

struct MomentCheck {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string reason;
};

namespace detail {

// Compares the (unbiased) sample variance against `expected` within three
// standard errors, the SE itself estimated from the sample's fourth moment.
inline MomentCheck sample_variance_check(double expected, const std::vector<double>& samples) {
  if (samples.size() < 2)
    throw DomainError("sample_variance_check: need at least two samples");
  MomentCheck check;
  check.name = "variance";
  check.expected = expected;
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double c2 = (x - mean) * (x - mean);
    m2 += c2;
    m4 += c2 * c2;
  }
  m2 /= n;
  m4 /= n;
  check.observed = m2 * n / (n - 1.0);
  const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  check.pass = std::abs(check.observed - check.expected) <= 3.0 * se;
  return check;
}

}  // namespace detail

inline MomentCheck moment_check(const Elliptical1D& d, const std::vector<double>& samples) {
  const auto psi = CharGenerator::for_density(d.gen);
  const auto vf = psi.variance_factor();
  if (!vf) {
    MomentCheck check;
    check.name = "variance";
    check.skipped = true;
    check.reason = "marginal has no finite variance";
    return check;
  }
  return detail::sample_variance_check(*vf * d.sigma * d.sigma, samples);
}

// ---------------------------------------------------------------------------
// The characteristic-function obstruction: for a two-bump location nu > 0 the
// putative identity requires cos(t nu) psi(sigma^2 t^2 / 2) to stay positive,
// yet it is nonpositive near t = pi/(2 nu) while complete monotonicity keeps
// the other side strictly positive. We exhibit a witness t on a grid.

struct ObstructionRecord {
  double nu = 0.0;
  double sigma = 0.0;
  std::string family;
  double t_first = 0.0;      // first grid point with rhs <= 0 (within FP noise)
  double rhs_at_first = 0.0;
  double t_witness = 0.0;    // grid argmin of the rhs
  double rhs_min = 0.0;
  std::size_t grid_size = 0;
  bool lhs_positive_implied = false;  // from psi_infty
  bool custom_caveat = false;         // psi_infty declared, not derived
};

inline double obstruction_rhs(double nu, double sigma, const CharGenerator& psi, double t) {
  return std::cos(t * nu) * psi(sigma * sigma * t * t / 2.0);
}

inline ObstructionRecord obstruction_witness(double nu, double sigma, const CharGenerator& psi,
                                     std::vector<double> t_grid = {}) {
  if (!(nu > 0.0)) throw DomainError("obstruction_witness: nu must be > 0");
  if (!(sigma > 0.0)) throw DomainError("obstruction_witness: sigma must be > 0");
  if (!psi.psi_infty())
    throw UnsupportedError(
        "obstruction_witness: generator must be completely monotone (psi_infty)");
  if (t_grid.empty()) {
    t_grid.resize(1000);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
      t_grid[i] = 2.0 * M_PI / nu * static_cast<double>(i) /
                  static_cast<double>(t_grid.size() - 1);
  }

  ObstructionRecord record;
  record.nu = nu;
  record.sigma = sigma;
  record.family = to_string(psi.family());
  record.grid_size = t_grid.size();
  record.lhs_positive_implied = true;
  record.custom_caveat = psi.family() == GenFamily::custom;

  bool found = false;
  double rhs_min = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    const double r = obstruction_rhs(nu, sigma, psi, t);
    if (r < rhs_min) {
      rhs_min = r;
      record.t_witness = t;
      record.rhs_min = r;
    }
    // cos(pi/2) is ~6e-17 in doubles; treat anything at FP-noise level as <= 0.
    if (!found && r <= 1e-12) {
      found = true;
      record.t_first = t;
      record.rhs_at_first = r;
    }
  }
  if (!found)
    throw NumericalError(
        "obstruction_witness: grid misses a nonpositive point; widen it to include t = " +
        std::to_string(M_PI / (2.0 * nu)));
  return record;
}

// ---------------------------------------------------------------------------
// Full verification of a construction: marginal KS, constancy, moments,
// branch balance. Deterministic for a fixed seed.

struct VerificationReport {
  std::vector<double> ks_per_marginal;
  double ks_threshold = 0.0;
  bool ks_pass = false;
  ConstancyReport constancy;
  std::vector<MomentCheck> moment_checks;
  bool moments_pass = true;
  std::optional<bool> balance_pass;  // switch constructions only
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

inline VerificationReport verify_construction(const Construction& c, std::size_t n,
                                              std::uint64_t seed) {
  if (n < 2) throw DomainError("verify_construction: need n >= 2");
  VerificationReport report;
  report.n = n;
  report.seed = seed;

  const std::size_t arity = c.marginals.size();
  std::vector<std::vector<double>> columns(arity, std::vector<double>{});
  for (auto& col : columns) col.reserve(n);

  ConstancyReport constancy;
  constancy.center = c.center.value();
  constancy.tolerance = 1e-8 * (1.0 + std::abs(constancy.center));
  constancy.n = n;
  const bool switch_like = c.inner_abs;
  double lo = 0.0, hi = 0.0;
  std::size_t plus = 0;

  MixSampler sampler(c, seed);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = sampler.draw();
    for (std::size_t i = 0; i < arity; ++i) columns[i].push_back(row[i]);
    const double v = c.phi(row);
    constancy.max_deviation = std::max(constancy.max_deviation, std::abs(v - constancy.center));
    if (switch_like) {
      const double s = c.phi.signed_inner(row);
      if (k == 0) lo = hi = s;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      if (s > 0.0) ++plus;
    }
  }
  constancy.pass = constancy.max_deviation <= constancy.tolerance;
  if (switch_like) {
    constancy.support_lo = lo;
    constancy.support_hi = hi;
    constancy.plus_fraction = static_cast<double>(plus) / static_cast<double>(n);
    const double band = 3.0 * std::sqrt(0.25 / static_cast<double>(n));
    report.balance_pass = std::abs(*constancy.plus_fraction - 0.5) <= band;
  }
  report.constancy = constancy;

  report.ks_threshold = ks_gate(n);
  report.ks_pass = true;
  for (std::size_t i = 0; i < arity; ++i) {
    const double stat = ks_statistic(columns[i], c.marginals[i]);
    report.ks_per_marginal.push_back(stat);
    if (stat >= report.ks_threshold) report.ks_pass = false;
  }

  for (std::size_t i = 0; i < arity; ++i) {
    MomentCheck check;
    if (const auto v = variance(c.marginals[i])) {
      check = detail::sample_variance_check(*v, columns[i]);
    } else {
      check.skipped = true;
      check.reason = "marginal has no finite variance";
    }
    check.name = "variance[" + std::to_string(i) + "]";
    if (!check.skipped && !check.pass) report.moments_pass = false;
    report.moment_checks.push_back(std::move(check));
  }

  report.pass = report.ks_pass && report.constancy.pass && report.moments_pass &&
                report.balance_pass.value_or(true);
  return report;
}

}  // namespace mixkit
