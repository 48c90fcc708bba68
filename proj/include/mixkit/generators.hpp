#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixkit/errors.hpp"
#include "mixkit/numeric.hpp"

namespace mixkit {

enum class GenFamily { normal, student_t, cauchy, laplace, custom };

inline const char* to_string(GenFamily f) {
  switch (f) {
    case GenFamily::normal: return "normal";
    case GenFamily::student_t: return "student_t";
    case GenFamily::cauchy: return "cauchy";
    case GenFamily::laplace: return "laplace";
    case GenFamily::custom: return "custom";
  }
  return "?";
}

struct AdmissibilityResult {
  bool admissible = false;
  double integral = 0.0;
  std::string reason;
};

// integral_0^inf u^{-1/2} f(u) du, split at u = 1 with the singular ends
// regularized by substitution: u = t^2 on the head, u = 1/s^2 on the tail.
// The same integral is the reciprocal of the 1-d elliptical normalizer.
inline AdmissibilityResult admissibility_integral(const std::function<double(double)>& f,
                                                  double abs_tol = 1e-10) {
  AdmissibilityResult res;
  // Divergence probes near the transformed endpoints.
  for (double t : {1e-9, 1e-7, 1e-5}) {
    const double head = 2.0 * f(t * t);
    const double tail = (f(1.0 / (t * t)) == 0.0) ? 0.0 : 2.0 * f(1.0 / (t * t)) / (t * t);
    if (!std::isfinite(head) || !std::isfinite(tail) || head > 1e14 || tail > 1e14) {
      res.reason = "integrand diverges near u = 0 or u = inf";
      return res;
    }
  }
  const auto head = integrate_adaptive([&f](double t) { return 2.0 * f(t * t); }, 0.0, 1.0,
                                       0.5 * abs_tol);
  const auto tail = integrate_adaptive(
      [&f](double s) {
        if (s == 0.0) {
          // endpoint limit: lim_{u->inf} 2 u f(u) (2 for a Cauchy-like tail,
          // 0 for anything integrable faster); a jump here stalls Simpson
          const double u = 1e18;
          const double v = 2.0 * u * f(u);
          return std::isfinite(v) ? v : 0.0;
        }
        const double v = f(1.0 / (s * s));
        return v == 0.0 ? 0.0 : 2.0 * v / (s * s);
      },
      0.0, 1.0, 0.5 * abs_tol);
  if (!head.converged || !tail.converged || !std::isfinite(head.value) ||
      !std::isfinite(tail.value)) {
    res.reason = "quadrature did not converge";
    return res;
  }
  res.integral = head.value + tail.value;
  if (!(res.integral > 0.0)) {
    res.reason = "integral is not strictly positive";
    return res;
  }
  res.admissible = true;
  return res;
}

// Density generator f of a 1-d elliptical family: the density is
// (C / sigma) f(((x - mu) / sigma)^2) with C the normalizer from
// elliptical_normalizer(). Custom generators are linear-interpolated tables
// with compact support; they are validated for admissibility on construction.
class DensityGenerator {
 public:
  static DensityGenerator normal() { return DensityGenerator(GenFamily::normal, 0.0); }
  static DensityGenerator cauchy() { return DensityGenerator(GenFamily::cauchy, 0.0); }
  static DensityGenerator laplace() { return DensityGenerator(GenFamily::laplace, 0.0); }
  static DensityGenerator student_t(double df) {
    if (!(df > 0.0)) throw DomainError("student_t generator: df must be > 0");
    return DensityGenerator(GenFamily::student_t, df);
  }
  static DensityGenerator custom(std::vector<double> u, std::vector<double> f) {
    for (double v : f)
      if (!(v >= 0.0)) throw DomainError("custom generator: f(u) must be nonnegative");
    if (!u.empty() && u.front() < 0.0)
      throw DomainError("custom generator: u must be nonnegative");
    DensityGenerator g(GenFamily::custom, 0.0);
    g.table_ = InterpTable(std::move(u), std::move(f));
    const auto adm = admissibility_integral([&g](double x) { return g(x); });
    if (!adm.admissible)
      throw DomainError("custom generator inadmissible: " + adm.reason);
    return g;
  }

  double operator()(double u) const {
    switch (family_) {
      case GenFamily::normal: return std::exp(-0.5 * u);
      case GenFamily::student_t: return std::pow(1.0 + u / df_, -0.5 * (df_ + 1.0));
      case GenFamily::cauchy: return 1.0 / (1.0 + u);
      case GenFamily::laplace: return std::exp(-std::sqrt(u));
      case GenFamily::custom: return table_(u);
    }
    return 0.0;
  }

  GenFamily family() const { return family_; }
  double df() const { return df_; }
  const InterpTable& table() const { return table_; }

  bool operator==(const DensityGenerator& o) const {
    if (family_ != o.family_) return false;
    if (family_ == GenFamily::student_t) return df_ == o.df_;
    if (family_ == GenFamily::custom)
      return table_.xs() == o.table_.xs() && table_.ys() == o.table_.ys();
    return true;
  }

  // Mean of the elliptical law exists. Custom tables have compact support,
  // hence all moments.
  bool finite_mean() const {
    switch (family_) {
      case GenFamily::normal:
      case GenFamily::laplace:
      case GenFamily::custom: return true;
      case GenFamily::student_t: return df_ > 1.0;
      case GenFamily::cauchy: return false;
    }
    return false;
  }

  bool finite_variance() const {
    switch (family_) {
      case GenFamily::normal:
      case GenFamily::laplace:
      case GenFamily::custom: return true;
      case GenFamily::student_t: return df_ > 2.0;
      case GenFamily::cauchy: return false;
    }
    return false;
  }

  // The one-bump elliptical density is unimodal iff f is nonincreasing.
  bool unimodal() const {
    if (family_ == GenFamily::custom) return table_.nonincreasing();
    return true;
  }

  // sqrt(u_max): half-width of the standardized support. +inf for the named
  // families.
  double support_radius() const {
    if (family_ == GenFamily::custom) return std::sqrt(table_.x_max());
    return std::numeric_limits<double>::infinity();
  }

 private:
  DensityGenerator(GenFamily fam, double df) : family_(fam), df_(df) {}
  GenFamily family_;
  double df_;
  InterpTable table_;
};

inline AdmissibilityResult generator_admissible(const DensityGenerator& gen) {
  return admissibility_integral([&gen](double u) { return gen(u); });
}

namespace detail {

inline double lbeta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace detail

// C = 1 / integral_0^inf u^{-1/2} f(u) du. Closed forms for the named
// families, quadrature for custom tables.
inline double elliptical_normalizer(const DensityGenerator& gen) {
  switch (gen.family()) {
    case GenFamily::normal: return 1.0 / std::sqrt(2.0 * M_PI);
    case GenFamily::cauchy: return 1.0 / M_PI;
    case GenFamily::laplace: return 0.5;
    case GenFamily::student_t: {
      // integral = sqrt(df) * B(1/2, df/2)
      const double df = gen.df();
      return std::exp(-0.5 * std::log(df) - detail::lbeta(0.5, 0.5 * df));
    }
    case GenFamily::custom: {
      const auto adm = generator_admissible(gen);
      if (!adm.admissible)
        throw DomainError("elliptical_normalizer: generator inadmissible: " + adm.reason);
      return 1.0 / adm.integral;
    }
  }
  throw DomainError("elliptical_normalizer: unknown family");
}

// Normalizing constant of the symmetric two-bump density
//   (C / 2 sigma) [ f((x-nu)^2/sigma^2) + f((x+nu)^2/sigma^2) ].
// Substituting t = (x -+ nu)/sigma in each term shows C equals the one-bump
// normalizer for every nu >= 0 and sigma > 0.
inline double two_bump_normalizer(double nu, double sigma, const DensityGenerator& gen) {
  if (!(nu >= 0.0)) throw DomainError("two_bump_normalizer: nu must be >= 0");
  if (!(sigma > 0.0)) throw DomainError("two_bump_normalizer: sigma must be > 0");
  return elliptical_normalizer(gen);
}

// Characteristic generator psi: the univariate characteristic function is
// exp(i t mu) psi(sigma^2 t^2 / 2), and psi(0) = 1 for every family. For a
// normal scale mixture X = sigma sqrt(W) Z this makes psi the Laplace
// transform of W, so the sampler's mixing laws and these formulas must agree
// family by family.
class CharGenerator {
 public:
  static CharGenerator normal() {
    return CharGenerator(GenFamily::normal, 0.0, -1.0, true);
  }
  static CharGenerator cauchy() {
    return CharGenerator(GenFamily::cauchy, 0.0, std::nullopt, true);
  }
  static CharGenerator laplace() {
    return CharGenerator(GenFamily::laplace, 0.0, -2.0, true);
  }
  static CharGenerator student_t(double df) {
    if (!(df > 0.0)) throw DomainError("student_t char generator: df must be > 0");
    std::optional<double> d0;
    if (df > 2.0) d0 = -df / (df - 2.0);
    return CharGenerator(GenFamily::student_t, df, d0, true);
  }
  // psi_infty is a declared flag for tables; membership in Psi_inf is not
  // decidable from finitely many samples of psi.
  static CharGenerator custom(std::vector<double> s, std::vector<double> psi,
                              std::optional<double> psi_prime0, bool psi_infty) {
    CharGenerator g(GenFamily::custom, 0.0, psi_prime0, psi_infty);
    g.table_ = InterpTable(std::move(s), std::move(psi));
    if (g.table_.x_min() != 0.0 || std::abs(g.table_.ys().front() - 1.0) > 1e-12)
      throw DomainError("custom char generator: table must start at (0, 1)");
    return g;
  }

  double operator()(double s) const {
    if (!(s >= 0.0)) throw DomainError("char generator: s must be >= 0");
    switch (family_) {
      case GenFamily::normal: return std::exp(-s);
      case GenFamily::cauchy: return std::exp(-std::sqrt(2.0 * s));
      case GenFamily::laplace: return 1.0 / (1.0 + 2.0 * s);
      case GenFamily::student_t: {
        if (s == 0.0) return 1.0;
        const double half = 0.5 * df_;
        // Laplace transform of W ~ df/chi2(df) (inverse gamma), in Bessel form
        //   psi(s) = 2^{1 - df/2} / Gamma(df/2) * z^{df/2} K_{df/2}(z),
        //   z = sqrt(2 df s).
        const double z = std::sqrt(2.0 * df_ * s);
        if (z < 1e-8) return 1.0;
        const double logv = (1.0 - half) * std::log(2.0) - std::lgamma(half) +
                            half * std::log(z);
        return std::exp(logv) * std::cyl_bessel_k(half, z);
      }
      case GenFamily::custom: return table_(s);
    }
    return 0.0;
  }

  GenFamily family() const { return family_; }
  double df() const { return df_; }
  std::optional<double> psi_prime_at_zero() const { return psi_prime0_; }
  bool psi_infty() const { return psi_infty_; }

  // Var[X] = -psi'(0) sigma^2 when it exists: differentiate psi(sigma^2 t^2/2)
  // twice at t = 0 (equivalently E[W] for the scale-mixture variable).
  std::optional<double> variance_factor() const {
    if (!psi_prime0_) return std::nullopt;
    return -*psi_prime0_;
  }

  static CharGenerator for_density(const DensityGenerator& gen) {
    switch (gen.family()) {
      case GenFamily::normal: return normal();
      case GenFamily::cauchy: return cauchy();
      case GenFamily::laplace: return laplace();
      case GenFamily::student_t: return student_t(gen.df());
      case GenFamily::custom:
        throw UnsupportedError(
            "char generator for a custom density generator must be supplied explicitly");
    }
    throw UnsupportedError("char generator: unknown family");
  }

 private:
  CharGenerator(GenFamily fam, double df, std::optional<double> d0, bool inf)
      : family_(fam), df_(df), psi_prime0_(d0), psi_infty_(inf) {}
  GenFamily family_;
  double df_;
  std::optional<double> psi_prime0_;
  bool psi_infty_;
  InterpTable table_;
};

}  // namespace mixkit
