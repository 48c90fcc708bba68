#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"

namespace mixkit {

// ---------------------------------------------------------------------------
// Aggregate targets: outer(inner(x)) with inner a weighted sum, its
// absolute value, or the weighted log-product (log of prod x_i^alpha_i).

enum class PhiShape { weighted_sum, abs_weighted_sum, weighted_log_product, abs_weighted_log_product };
enum class OuterFn { identity, square, abs, exp, negate };

inline const char* to_string(PhiShape s) {
  switch (s) {
    case PhiShape::weighted_sum: return "weighted_sum";
    case PhiShape::abs_weighted_sum: return "abs_weighted_sum";
    case PhiShape::weighted_log_product: return "weighted_log_product";
    case PhiShape::abs_weighted_log_product: return "abs_weighted_log_product";
  }
  return "?";
}

inline const char* to_string(OuterFn f) {
  switch (f) {
    case OuterFn::identity: return "identity";
    case OuterFn::square: return "square";
    case OuterFn::abs: return "abs";
    case OuterFn::exp: return "exp";
    case OuterFn::negate: return "negate";
  }
  return "?";
}

inline double apply_outer(OuterFn f, double t) {
  switch (f) {
    case OuterFn::identity: return t;
    case OuterFn::square: return t * t;
    case OuterFn::abs: return std::abs(t);
    case OuterFn::exp: return std::exp(t);
    case OuterFn::negate: return -t;
  }
  return t;
}

inline bool outer_injective(OuterFn f) {
  return f == OuterFn::identity || f == OuterFn::exp || f == OuterFn::negate;
}

// outer(|t|) == outer(t) for all t: the switch construction certifies these.
inline bool outer_even(OuterFn f) { return f == OuterFn::square || f == OuterFn::abs; }

struct PhiSpec {
  PhiShape shape;
  OuterFn outer;
  std::vector<double> alphas;

  PhiSpec(PhiShape s, OuterFn o, std::vector<double> a)
      : shape(s), outer(o), alphas(std::move(a)) {
    if (alphas.size() < 2) throw ArityError("PhiSpec: need at least 2 coordinates");
    for (double v : alphas)
      if (!(v > 0.0)) throw DomainError("PhiSpec: alphas must be > 0");
  }

  bool log_scale() const {
    return shape == PhiShape::weighted_log_product || shape == PhiShape::abs_weighted_log_product;
  }
  bool abs_inner() const {
    return shape == PhiShape::abs_weighted_sum || shape == PhiShape::abs_weighted_log_product;
  }
  // Non-injective phi only ever yields "sufficient" claims.
  bool injective() const { return !abs_inner() && outer_injective(outer); }

  double inner(std::span<const double> x) const {
    if (x.size() != alphas.size()) throw ArityError("PhiSpec: arity mismatch");
    double s = 0.0;
    if (log_scale()) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw DomainError("PhiSpec: log-product needs positive coordinates");
        s += alphas[i] * std::log(x[i]);
      }
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) s += alphas[i] * x[i];
    }
    return abs_inner() ? std::abs(s) : s;
  }

  // The signed weighted sum (or signed log-product), ignoring abs.
  double signed_inner(std::span<const double> x) const {
    double s = 0.0;
    if (log_scale()) {
      for (std::size_t i = 0; i < x.size(); ++i) s += alphas[i] * std::log(x[i]);
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) s += alphas[i] * x[i];
    }
    return s;
  }

  double operator()(std::span<const double> x) const { return apply_outer(outer, inner(x)); }
};

// ---------------------------------------------------------------------------
// Center sets.

struct CenterSet {
  enum class Kind { point, interval, unknown };
  Kind kind = Kind::unknown;
  double lo = 0.0;
  double hi = 0.0;

  static CenterSet point(double c) { return {Kind::point, c, c}; }
  static CenterSet interval(double lo, double hi) {
    if (!(lo <= hi)) throw DomainError("CenterSet: lo must be <= hi");
    if (lo == hi) return point(lo);
    return {Kind::interval, lo, hi};
  }
  static CenterSet unknown() { return {}; }

  bool is_point() const { return kind == Kind::point; }
  double value() const {
    if (!is_point()) throw DomainError("CenterSet: not a point");
    return lo;
  }
};

inline const char* to_string(CenterSet::Kind k) {
  switch (k) {
    case CenterSet::Kind::point: return "point";
    case CenterSet::Kind::interval: return "interval";
    case CenterSet::Kind::unknown: return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// The mixability criterion: m = sum(alpha_i sigma_i) - 2 max(alpha_i sigma_i).
// m > 0 mixable, m = 0 boundary (equality still admits a mix, but the
// construction degenerates to rank one), m < 0 not mixable.

enum class Verdict { mixable, boundary, not_mixable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::mixable: return "mixable";
    case Verdict::boundary: return "boundary";
    case Verdict::not_mixable: return "not_mixable";
  }
  return "?";
}

struct ConditionResult {
  Verdict verdict;
  double margin;  // sum - 2 max
  double lhs;     // sum(alpha_i sigma_i)
  double rhs;     // 2 max(alpha_i sigma_i)
};

inline ConditionResult check_condition(std::span<const double> alphas,
                                       std::span<const double> sigmas) {
  if (alphas.size() != sigmas.size())
    throw ArityError("check_condition: alphas and sigmas must have equal length");
  if (alphas.size() < 2) throw ArityError("check_condition: need n >= 2");
  double sum = 0.0;
  double mx = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0) || !(sigmas[i] > 0.0))
      throw DomainError("check_condition: entries must be > 0");
    const double w = alphas[i] * sigmas[i];
    sum += w;
    mx = std::max(mx, w);
  }
  const double margin = sum - 2.0 * mx;
  Verdict v;
  if (std::abs(margin) <= 1e-12 * mx)
    v = Verdict::boundary;
  else
    v = margin > 0.0 ? Verdict::mixable : Verdict::not_mixable;
  return {v, margin, sum, 2.0 * mx};
}

// ---------------------------------------------------------------------------
// Problems and decisions.

struct MixProblem {
  std::vector<DistributionSpec> marginals;
  PhiSpec phi;

  MixProblem(std::vector<DistributionSpec> m, PhiSpec p)
      : marginals(std::move(m)), phi(std::move(p)) {
    if (marginals.size() < 2) throw ArityError("MixProblem: need at least 2 marginals");
    if (phi.alphas.size() != marginals.size())
      throw ArityError("MixProblem: phi.alphas arity must match marginal count");
    const bool pos = positive_support(marginals.front());
    for (const auto& d : marginals)
      if (positive_support(d) != pos)
        throw UnsupportedError("MixProblem: marginals must share one support class");
    if (phi.log_scale() != pos)
      throw UnsupportedError(pos ? "MixProblem: positive marginals need a log-product phi"
                                 : "MixProblem: real-line marginals need a sum phi");
  }

  std::size_t arity() const { return marginals.size(); }
};

enum class Claim { iff, sufficient };

struct Decision {
  Verdict verdict;
  double margin;
  double lhs;
  double rhs;
  Claim claim;
  std::string reduction;  // which case of the criterion applied
};

namespace detail {

inline void require_common_generator(const std::vector<DistributionSpec>& marginals) {
  const auto& g0 = generator_of(marginals.front());
  for (const auto& d : marginals)
    if (!(generator_of(d) == g0))
      throw UnsupportedError("decide: marginals must share one density generator");
}

}  // namespace detail

// Reduces the decision to check_condition on (alpha_i, sigma_i). Log families
// reduce to their log-transformed images; two-bump tuples are decided by the
// same condition but only with a "sufficient" claim (the switch construction
// proves that direction only).
inline Decision decide(const MixProblem& problem) {
  detail::require_common_generator(problem.marginals);
  bool any_two_bump = false;
  std::vector<double> sigmas;
  sigmas.reserve(problem.arity());
  for (const auto& d : problem.marginals) {
    sigmas.push_back(sigma_of(d));
    if (d.index() == 1 || d.index() == 3) any_two_bump = true;
  }
  const auto cond = check_condition(problem.phi.alphas, sigmas);
  const bool iff = problem.phi.injective() && !any_two_bump;
  std::string reduction;
  if (positive_support(problem.marginals.front()))
    reduction = any_two_bump ? "log_two_bump" : "log_elliptical";
  else
    reduction = any_two_bump ? "two_bump" : "elliptical";
  return {cond.verdict, cond.margin, cond.lhs, cond.rhs,
          iff ? Claim::iff : Claim::sufficient, reduction};
}

// ---------------------------------------------------------------------------
// Closed-form center sets.

// Unique joint center sum(alpha_i mu_i) for elliptical marginals with finite
// means.
inline CenterSet joint_center(const std::vector<Elliptical1D>& marginals,
                              std::span<const double> alphas) {
  if (marginals.size() != alphas.size()) throw ArityError("joint_center: arity mismatch");
  if (marginals.size() < 2) throw ArityError("joint_center: need n >= 2");
  double c = 0.0;
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    if (!marginals[i].gen.finite_mean())
      throw DomainError(
          "joint_center: marginal has no mean; use the center-interval operations");
    c += alphas[i] * marginals[i].mu;
  }
  return CenterSet::point(c);
}

// n-centers of the Cauchy(mu, sigma): [n mu - sigma log(n-1)/pi, n mu + sigma log(n-1)/pi].
inline CenterSet cauchy_center_interval(std::size_t n, double mu, double sigma) {
  if (n < 2) throw ArityError("cauchy_center_interval: need n >= 2");
  if (!(sigma > 0.0)) throw DomainError("cauchy_center_interval: sigma must be > 0");
  const double half = sigma * std::log(static_cast<double>(n - 1)) / M_PI;
  return CenterSet::interval(static_cast<double>(n) * mu - half,
                             static_cast<double>(n) * mu + half);
}

// phi-centers for phi(x) = (x_1 + ... + x_n)^2 over n Cauchy(mu, sigma) marginals.
inline CenterSet phi_square_center_set(std::size_t n, double mu, double sigma) {
  const auto base = cauchy_center_interval(n, mu, sigma);
  const double hi = base.hi;
  return CenterSet::interval(0.0, hi * hi);
}

// n-product centers of the log-Cauchy(mu, sigma): exponential image of the
// Cauchy center interval.
inline CenterSet log_cauchy_product_interval(std::size_t n, double mu, double sigma) {
  const auto base = cauchy_center_interval(n, mu, sigma);
  return CenterSet::interval(std::exp(base.lo), std::exp(base.hi));
}

// Center of the switch construction: outer(sum nu_i).
inline CenterSet switch_center(std::span<const double> nus, OuterFn outer) {
  double s = 0.0;
  for (double v : nus) {
    if (!(v >= 0.0)) throw DomainError("switch_center: nus must be >= 0");
    s += v;
  }
  return CenterSet::point(apply_outer(outer, s));
}

// The center set our constructions certify for this problem; unknown when no
// closed form applies (we never guess).
inline CenterSet center_set_for(const MixProblem& problem) {
  const auto& phi = problem.phi;
  const std::size_t n = problem.arity();

  bool any_bump = false;
  for (const auto& d : problem.marginals)
    if (d.index() == 1 || d.index() == 3) any_bump = true;
  if (any_bump) {
    // Sign-switch constant: outer(sum alpha_i nu_i), on the log scale for
    // products. Without an absolute value (or even outer) no constant is
    // certified for a strictly two-bump tuple.
    double s = 0.0;
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double nu = std::visit(
          [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TwoBump> || std::is_same_v<T, LogTwoBump>)
              return v.nu;
            else if constexpr (std::is_same_v<T, Elliptical1D>)
              return v.mu == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
            else
              return std::numeric_limits<double>::quiet_NaN();
          },
          problem.marginals[i]);
      if (std::isnan(nu)) return CenterSet::unknown();
      if (nu != 0.0) all_zero = false;
      s += phi.alphas[i] * nu;
    }
    if (all_zero || phi.abs_inner() || outer_even(phi.outer))
      return CenterSet::point(apply_outer(phi.outer, phi.abs_inner() ? std::abs(s) : s));
    return CenterSet::unknown();
  }

  // Plain (log-)elliptical tuples. Location parameters of the additive scale.
  std::vector<double> mus(n), sigmas(n);
  bool finite_means = true;
  for (std::size_t i = 0; i < n; ++i) {
    mus[i] = location_of(problem.marginals[i]);
    sigmas[i] = sigma_of(problem.marginals[i]);
    if (!generator_of(problem.marginals[i]).finite_mean()) finite_means = false;
  }

  if (finite_means) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += phi.alphas[i] * mus[i];
    return CenterSet::point(apply_outer(phi.outer, phi.abs_inner() ? std::abs(c) : c));
  }

  // Infinite means: closed forms exist for identical Cauchy marginals with
  // equal weights only.
  const bool all_cauchy = generator_of(problem.marginals.front()).family() == GenFamily::cauchy;
  bool identical = true;
  for (std::size_t i = 1; i < n; ++i)
    if (mus[i] != mus[0] || sigmas[i] != sigmas[0] || phi.alphas[i] != phi.alphas[0])
      identical = false;
  if (!all_cauchy || !identical || phi.abs_inner()) return CenterSet::unknown();

  const double a = phi.alphas[0];
  const auto base = cauchy_center_interval(n, mus[0], sigmas[0]);
  switch (phi.outer) {
    case OuterFn::identity:
      return CenterSet::interval(a * base.lo, a * base.hi);
    case OuterFn::negate:
      return CenterSet::interval(-a * base.hi, -a * base.lo);
    case OuterFn::exp:
      return CenterSet::interval(std::exp(a * base.lo), std::exp(a * base.hi));
    case OuterFn::square: {
      const double reach = a * std::max(std::abs(base.lo), std::abs(base.hi));
      return CenterSet::interval(0.0, reach * reach);
    }
    case OuterFn::abs:
      return CenterSet::unknown();
  }
  return CenterSet::unknown();
}

}  // namespace mixkit
