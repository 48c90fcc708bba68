#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "mixkit/errors.hpp"
#include "mixkit/generators.hpp"
#include "mixkit/numeric.hpp"
#include "mixkit/rng.hpp"

namespace mixkit {

// ---------------------------------------------------------------------------
// Families. All are immutable after construction.

struct Elliptical1D {
  double mu;
  double sigma;
  DensityGenerator gen;

  Elliptical1D(double mu_, double sigma_, DensityGenerator gen_)
      : mu(mu_), sigma(sigma_), gen(std::move(gen_)) {
    if (!(sigma > 0.0)) throw DomainError("Elliptical1D: sigma must be > 0");
  }

  bool operator==(const Elliptical1D& o) const {
    return mu == o.mu && sigma == o.sigma && gen == o.gen;
  }
};

// Symmetric equal mixture of elliptical components centered at +nu and -nu.
struct TwoBump {
  double nu;
  double sigma;
  DensityGenerator gen;
  double c_norm;  // shared normalizer, computed on construction

  TwoBump(double nu_, double sigma_, DensityGenerator gen_)
      : nu(nu_), sigma(sigma_), gen(std::move(gen_)), c_norm(two_bump_normalizer(nu_, sigma_, gen)) {}

  bool operator==(const TwoBump& o) const {
    return nu == o.nu && sigma == o.sigma && gen == o.gen;
  }
};

// exp(E) for E elliptical; parameters are those of the underlying law.
struct LogElliptical1D {
  double mu;
  double sigma;
  DensityGenerator gen;

  LogElliptical1D(double mu_, double sigma_, DensityGenerator gen_)
      : mu(mu_), sigma(sigma_), gen(std::move(gen_)) {
    if (!(sigma > 0.0)) throw DomainError("LogElliptical1D: sigma must be > 0");
  }

  bool operator==(const LogElliptical1D& o) const {
    return mu == o.mu && sigma == o.sigma && gen == o.gen;
  }
};

struct LogTwoBump {
  double nu;
  double sigma;
  DensityGenerator gen;
  double c_norm;

  LogTwoBump(double nu_, double sigma_, DensityGenerator gen_)
      : nu(nu_), sigma(sigma_), gen(std::move(gen_)), c_norm(two_bump_normalizer(nu_, sigma_, gen)) {}

  bool operator==(const LogTwoBump& o) const {
    return nu == o.nu && sigma == o.sigma && gen == o.gen;
  }
};

using DistributionSpec = std::variant<Elliptical1D, TwoBump, LogElliptical1D, LogTwoBump>;

inline const char* kind_name(const DistributionSpec& d) {
  switch (d.index()) {
    case 0: return "elliptical";
    case 1: return "two_bump";
    case 2: return "log_elliptical";
    case 3: return "log_two_bump";
  }
  return "?";
}

inline bool positive_support(const DistributionSpec& d) { return d.index() >= 2; }

inline const DensityGenerator& generator_of(const DistributionSpec& d) {
  return std::visit([](const auto& v) -> const DensityGenerator& { return v.gen; }, d);
}

inline double sigma_of(const DistributionSpec& d) {
  return std::visit([](const auto& v) { return v.sigma; }, d);
}

// Location parameter: mu for one-bump families, bump offset nu for two-bump.
inline double location_of(const DistributionSpec& d) {
  switch (d.index()) {
    case 0: return std::get<Elliptical1D>(d).mu;
    case 1: return std::get<TwoBump>(d).nu;
    case 2: return std::get<LogElliptical1D>(d).mu;
    case 3: return std::get<LogTwoBump>(d).nu;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Standardized (mu = 0, sigma = 1) building blocks.

namespace detail {

inline double std_pdf(const DensityGenerator& gen, double z) {
  return elliptical_normalizer(gen) * gen(z * z);
}

inline double custom_std_cdf(const DensityGenerator& gen, double z) {
  const double radius = gen.support_radius();
  const double za = std::min(std::abs(z), radius);
  if (za == 0.0) return 0.5;
  const double c = elliptical_normalizer(gen);
  const auto q = integrate_adaptive([&gen, c](double t) { return c * gen(t * t); }, 0.0, za);
  const double half_mass = std::min(q.value, 0.5);
  return z > 0.0 ? 0.5 + half_mass : 0.5 - half_mass;
}

inline double std_cdf(const DensityGenerator& gen, double z) {
  switch (gen.family()) {
    case GenFamily::normal: return 0.5 * std::erfc(-z / std::sqrt(2.0));
    case GenFamily::cauchy: return 0.5 + std::atan(z) / M_PI;
    case GenFamily::laplace: return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    case GenFamily::student_t:
      return boost::math::cdf(boost::math::students_t_distribution<double>(gen.df()), z);
    case GenFamily::custom: return custom_std_cdf(gen, z);
  }
  return 0.0;
}

inline double std_quantile(const DensityGenerator& gen, double p) {
  switch (gen.family()) {
    case GenFamily::normal:
      // evaluate in the nearer tail for full relative precision
      return p < 0.5 ? -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p)
                     : std::sqrt(2.0) * boost::math::erfc_inv(2.0 * (1.0 - p));
    case GenFamily::cauchy: return std::tan(M_PI * (p - 0.5));
    case GenFamily::laplace:
      return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    case GenFamily::student_t:
      return boost::math::quantile(boost::math::students_t_distribution<double>(gen.df()), p);
    case GenFamily::custom: {
      const double radius = gen.support_radius();
      return solve_bracketed([&gen, p](double z) { return custom_std_cdf(gen, z) - p; },
                             -radius, radius);
    }
  }
  return 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Density / CDF / quantile.

inline double pdf(const DistributionSpec& d, double x);

namespace detail {

inline double pdf_impl(const Elliptical1D& d, double x) {
  const double z = (x - d.mu) / d.sigma;
  return elliptical_normalizer(d.gen) / d.sigma * d.gen(z * z);
}

inline double pdf_impl(const TwoBump& d, double x) {
  const double zm = (x - d.nu) / d.sigma;
  const double zp = (x + d.nu) / d.sigma;
  return d.c_norm / (2.0 * d.sigma) * (d.gen(zm * zm) + d.gen(zp * zp));
}

inline double pdf_impl(const LogElliptical1D& d, double x) {
  if (x <= 0.0) return 0.0;  // density off the support, consistent with cdf
  const double z = (std::log(x) - d.mu) / d.sigma;
  return elliptical_normalizer(d.gen) / (d.sigma * x) * d.gen(z * z);
}

inline double pdf_impl(const LogTwoBump& d, double x) {
  if (x <= 0.0) return 0.0;
  const double lx = std::log(x);
  const double zm = (lx - d.nu) / d.sigma;
  const double zp = (lx + d.nu) / d.sigma;
  return d.c_norm / (2.0 * d.sigma * x) * (d.gen(zm * zm) + d.gen(zp * zp));
}

}  // namespace detail

inline double pdf(const DistributionSpec& d, double x) {
  return std::visit([x](const auto& v) { return detail::pdf_impl(v, x); }, d);
}

inline double cdf(const DistributionSpec& d, double x) {
  switch (d.index()) {
    case 0: {
      const auto& v = std::get<Elliptical1D>(d);
      return detail::std_cdf(v.gen, (x - v.mu) / v.sigma);
    }
    case 1: {
      const auto& v = std::get<TwoBump>(d);
      return 0.5 * (detail::std_cdf(v.gen, (x - v.nu) / v.sigma) +
                    detail::std_cdf(v.gen, (x + v.nu) / v.sigma));
    }
    case 2: {
      const auto& v = std::get<LogElliptical1D>(d);
      if (x <= 0.0) return 0.0;
      return detail::std_cdf(v.gen, (std::log(x) - v.mu) / v.sigma);
    }
    case 3: {
      const auto& v = std::get<LogTwoBump>(d);
      if (x <= 0.0) return 0.0;
      const double lx = std::log(x);
      return 0.5 * (detail::std_cdf(v.gen, (lx - v.nu) / v.sigma) +
                    detail::std_cdf(v.gen, (lx + v.nu) / v.sigma));
    }
  }
  return 0.0;
}

namespace detail {

inline double two_bump_quantile(double nu, double sigma, const DensityGenerator& gen, double p) {
  const double zq = std_quantile(gen, p);
  if (nu == 0.0) return sigma * zq;
  // F_{+nu} <= F <= F_{-nu} pointwise, so the one-bump quantiles bracket.
  const double lo = -nu + sigma * zq;
  const double hi = nu + sigma * zq;
  auto target = [&](double x) {
    return 0.5 * (std_cdf(gen, (x - nu) / sigma) + std_cdf(gen, (x + nu) / sigma)) - p;
  };
  return solve_bracketed(target, lo, hi);
}

}  // namespace detail

inline double quantile(const DistributionSpec& d, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must be in (0, 1)");
  switch (d.index()) {
    case 0: {
      const auto& v = std::get<Elliptical1D>(d);
      return v.mu + v.sigma * detail::std_quantile(v.gen, p);
    }
    case 1: {
      const auto& v = std::get<TwoBump>(d);
      return detail::two_bump_quantile(v.nu, v.sigma, v.gen, p);
    }
    case 2: {
      const auto& v = std::get<LogElliptical1D>(d);
      return std::exp(v.mu + v.sigma * detail::std_quantile(v.gen, p));
    }
    case 3: {
      const auto& v = std::get<LogTwoBump>(d);
      return std::exp(detail::two_bump_quantile(v.nu, v.sigma, v.gen, p));
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Moments. Undefined moments are reported as nullopt, never NaN.

namespace detail {

// Var[Ell(0,1)] = -psi'(0), extended to custom tables by the moment integral
// C * integral sqrt(u) f(u) du over the (compact) support.
inline std::optional<double> variance_factor_of(const DensityGenerator& gen) {
  switch (gen.family()) {
    case GenFamily::normal: return 1.0;
    case GenFamily::laplace: return 2.0;
    case GenFamily::student_t:
      if (gen.df() > 2.0) return gen.df() / (gen.df() - 2.0);
      return std::nullopt;
    case GenFamily::cauchy: return std::nullopt;
    case GenFamily::custom: {
      const double c = elliptical_normalizer(gen);
      const auto q = integrate_adaptive(
          [&gen, c](double u) { return c * std::sqrt(u) * gen(u); }, 0.0,
          gen.table().x_max(), 1e-10);
      return q.value;
    }
  }
  return std::nullopt;
}

// E[exp(k sigma Z)] for Z the standardized one-bump law; nullopt if infinite.
inline std::optional<double> exp_moment(const DensityGenerator& gen, double sigma, double k) {
  const double ks = k * sigma;
  switch (gen.family()) {
    case GenFamily::normal: return std::exp(0.5 * ks * ks);
    case GenFamily::laplace:
      if (std::abs(ks) < 1.0) return 1.0 / (1.0 - ks * ks);
      return std::nullopt;
    case GenFamily::student_t:
    case GenFamily::cauchy: return std::nullopt;  // polynomial tails
    case GenFamily::custom: {
      const double r = gen.support_radius();
      const double c = elliptical_normalizer(gen);
      const auto q = integrate_adaptive(
          [&gen, c, ks](double z) { return std::exp(ks * z) * c * gen(z * z); }, -r, r, 1e-10);
      return q.value;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<double> mean(const DistributionSpec& d) {
  switch (d.index()) {
    case 0: {
      const auto& v = std::get<Elliptical1D>(d);
      if (!v.gen.finite_mean()) return std::nullopt;
      return v.mu;
    }
    case 1: {
      const auto& v = std::get<TwoBump>(d);
      if (!v.gen.finite_mean()) return std::nullopt;
      return 0.0;  // symmetric
    }
    case 2: {
      const auto& v = std::get<LogElliptical1D>(d);
      const auto m1 = detail::exp_moment(v.gen, v.sigma, 1.0);
      if (!m1) return std::nullopt;
      return std::exp(v.mu) * *m1;
    }
    case 3: {
      const auto& v = std::get<LogTwoBump>(d);
      const auto m1 = detail::exp_moment(v.gen, v.sigma, 1.0);
      if (!m1) return std::nullopt;
      return std::cosh(v.nu) * *m1;
    }
  }
  return std::nullopt;
}

inline std::optional<double> variance(const DistributionSpec& d) {
  switch (d.index()) {
    case 0: {
      const auto& v = std::get<Elliptical1D>(d);
      if (!v.gen.finite_variance()) return std::nullopt;
      const auto vf = detail::variance_factor_of(v.gen);
      if (!vf) return std::nullopt;
      return *vf * v.sigma * v.sigma;
    }
    case 1: {
      const auto& v = std::get<TwoBump>(d);
      if (!v.gen.finite_variance()) return std::nullopt;
      const auto vf = detail::variance_factor_of(v.gen);
      if (!vf) return std::nullopt;
      return *vf * v.sigma * v.sigma + v.nu * v.nu;  // X = S nu + sigma Z, S fair sign
    }
    case 2: {
      const auto& v = std::get<LogElliptical1D>(d);
      const auto m1 = detail::exp_moment(v.gen, v.sigma, 1.0);
      const auto m2 = detail::exp_moment(v.gen, v.sigma, 2.0);
      if (!m1 || !m2) return std::nullopt;
      const double mu1 = std::exp(v.mu) * *m1;
      return std::exp(2.0 * v.mu) * *m2 - mu1 * mu1;
    }
    case 3: {
      const auto& v = std::get<LogTwoBump>(d);
      const auto m1 = detail::exp_moment(v.gen, v.sigma, 1.0);
      const auto m2 = detail::exp_moment(v.gen, v.sigma, 2.0);
      if (!m1 || !m2) return std::nullopt;
      const double mu1 = std::cosh(v.nu) * *m1;
      return std::cosh(2.0 * v.nu) * *m2 - mu1 * mu1;
    }
  }
  return std::nullopt;
}

inline bool finite_variance(const DistributionSpec& d) { return variance(d).has_value(); }

// ---------------------------------------------------------------------------
// Log transform: for phi weights alpha, G(x) = F(exp(x / alpha)) links the
// real-line law F-side and the positive-support law. Round trips are exact.

inline DistributionSpec log_transform(const DistributionSpec& d, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("log_transform: alpha must be > 0");
  switch (d.index()) {
    case 0: {
      const auto& v = std::get<Elliptical1D>(d);
      return LogElliptical1D(v.mu / alpha, v.sigma / alpha, v.gen);
    }
    case 1: {
      const auto& v = std::get<TwoBump>(d);
      return LogTwoBump(v.nu / alpha, v.sigma / alpha, v.gen);
    }
    default:
      throw DomainError("log_transform: input must be a real-line family");
  }
}

inline DistributionSpec log_transform_inverse(const DistributionSpec& d, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("log_transform_inverse: alpha must be > 0");
  switch (d.index()) {
    case 2: {
      const auto& v = std::get<LogElliptical1D>(d);
      return Elliptical1D(v.mu * alpha, v.sigma * alpha, v.gen);
    }
    case 3: {
      const auto& v = std::get<LogTwoBump>(d);
      return TwoBump(v.nu * alpha, v.sigma * alpha, v.gen);
    }
    default:
      throw DomainError("log_transform_inverse: input must be a positive-support family");
  }
}

// ---------------------------------------------------------------------------
// Sampling. Inverse-CDF draws; two-bump families consume a fair sign bit
// followed by one uniform, which keeps the mixture exact (no rejection).

inline double draw(const DistributionSpec& d, SeedStream& stream) {
  switch (d.index()) {
    case 0: {
      const auto& v = std::get<Elliptical1D>(d);
      return v.mu + v.sigma * detail::std_quantile(v.gen, stream.uniform01());
    }
    case 1: {
      const auto& v = std::get<TwoBump>(d);
      const double s = stream.fair_bit() ? 1.0 : -1.0;
      return s * v.nu + v.sigma * detail::std_quantile(v.gen, stream.uniform01());
    }
    case 2: {
      const auto& v = std::get<LogElliptical1D>(d);
      return std::exp(v.mu + v.sigma * detail::std_quantile(v.gen, stream.uniform01()));
    }
    case 3: {
      const auto& v = std::get<LogTwoBump>(d);
      const double s = stream.fair_bit() ? 1.0 : -1.0;
      return std::exp(s * v.nu + v.sigma * detail::std_quantile(v.gen, stream.uniform01()));
    }
  }
  return 0.0;
}

inline std::vector<double> sample(const DistributionSpec& d, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample: n must be >= 1");
  SeedStream stream(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw(d, stream));
  return out;
}

}  // namespace mixkit
