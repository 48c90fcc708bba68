#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixkit/couplings.hpp"
#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/mixability.hpp"
#include "mixkit/rearrange.hpp"
#include "mixkit/verify.hpp"
#include "mixkit/version.hpp"

namespace mixkit {

using json = nlohmann::json;

// Scenario files violating the schema raise this with the offending field.
struct SchemaError : Error {
  using Error::Error;
};

struct ScenarioOptions {
  std::size_t n_samples = 100000;
  std::size_t m = 256;
  std::vector<std::size_t> schedule;
  double trim = -1.0;  // negative: pick 0.001 for heavy tails, 0 otherwise
  double tol = 1e-12;
  int max_sweeps = 1000;
  std::optional<Method> method;
};

struct Scenario {
  std::vector<DistributionSpec> marginals;
  PhiSpec phi;
  std::optional<std::uint64_t> seed;
  ScenarioOptions options;
  json raw;  // embedded verbatim in every output for reproducibility
};

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

inline const json& require_field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object() || !j.contains(name))
    throw SchemaError("scenario: missing field " + where + "." + name);
  return j.at(name);
}

inline double require_number(const json& j, const char* name, const std::string& where) {
  const json& v = require_field(j, name, where);
  if (!v.is_number()) throw SchemaError("scenario: " + where + "." + name + " must be a number");
  return v.get<double>();
}

inline std::string require_string(const json& j, const char* name, const std::string& where) {
  const json& v = require_field(j, name, where);
  if (!v.is_string()) throw SchemaError("scenario: " + where + "." + name + " must be a string");
  return v.get<std::string>();
}

inline DensityGenerator parse_generator(const json& j, const std::string& where) {
  const std::string family = require_string(j, "family", where);
  if (family == "normal") return DensityGenerator::normal();
  if (family == "cauchy") return DensityGenerator::cauchy();
  if (family == "laplace") return DensityGenerator::laplace();
  if (family == "student_t") return DensityGenerator::student_t(require_number(j, "df", where));
  throw SchemaError("scenario: " + where + ".family: unknown family '" + family +
                    "' (expected normal|student_t|cauchy|laplace)");
}

inline DistributionSpec parse_marginal(const json& j, std::size_t index) {
  const std::string where = "marginals[" + std::to_string(index) + "]";
  const std::string kind = require_string(j, "kind", where);
  DensityGenerator gen = parse_generator(j, where);
  try {
    if (kind == "elliptical")
      return Elliptical1D(require_number(j, "mu", where), require_number(j, "sigma", where),
                          std::move(gen));
    if (kind == "two_bump")
      return TwoBump(require_number(j, "nu", where), require_number(j, "sigma", where),
                     std::move(gen));
    if (kind == "log_elliptical")
      return LogElliptical1D(require_number(j, "mu", where), require_number(j, "sigma", where),
                             std::move(gen));
    if (kind == "log_two_bump")
      return LogTwoBump(require_number(j, "nu", where), require_number(j, "sigma", where),
                        std::move(gen));
  } catch (const DomainError& e) {
    throw SchemaError("scenario: " + where + ": " + e.what());
  }
  throw SchemaError("scenario: " + where +
                    ".kind: unknown kind '" + kind +
                    "' (expected elliptical|two_bump|log_elliptical|log_two_bump)");
}

inline PhiShape parse_shape(const std::string& s) {
  if (s == "weighted_sum") return PhiShape::weighted_sum;
  if (s == "abs_weighted_sum") return PhiShape::abs_weighted_sum;
  if (s == "weighted_log_product") return PhiShape::weighted_log_product;
  if (s == "abs_weighted_log_product") return PhiShape::abs_weighted_log_product;
  throw SchemaError("scenario: phi.shape: unknown shape '" + s + "'");
}

inline OuterFn parse_outer(const std::string& s) {
  if (s == "identity") return OuterFn::identity;
  if (s == "square") return OuterFn::square;
  if (s == "abs") return OuterFn::abs;
  if (s == "exp") return OuterFn::exp;
  if (s == "negate") return OuterFn::negate;
  throw SchemaError("scenario: phi.outer: unknown outer function '" + s + "'");
}

inline Method parse_method(const std::string& s) {
  if (s == "negation_pair") return Method::negation_pair;
  if (s == "gaussian_degenerate") return Method::gaussian_degenerate;
  if (s == "scale_mixture") return Method::scale_mixture;
  if (s == "bernoulli_switch") return Method::bernoulli_switch;
  if (s == "product_mix") return Method::product_mix;
  throw SchemaError("scenario: options.method: unknown method '" + s + "'");
}

inline PhiSpec parse_phi(const json& j) {
  const json& alphas_json = require_field(j, "alphas", "phi");
  if (!alphas_json.is_array() || alphas_json.empty())
    throw SchemaError("scenario: phi.alphas must be a nonempty array of numbers");
  std::vector<double> alphas;
  for (const auto& a : alphas_json) {
    if (!a.is_number()) throw SchemaError("scenario: phi.alphas must contain only numbers");
    alphas.push_back(a.get<double>());
  }
  try {
    return PhiSpec(parse_shape(require_string(j, "shape", "phi")),
                   parse_outer(require_string(j, "outer", "phi")), std::move(alphas));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string("scenario: phi: ") + e.what());
  }
}

}  // namespace detail

inline Scenario parse_scenario(const json& j) {
  Scenario s{{}, detail::parse_phi(detail::require_field(j, "phi", "")), {}, {}, j};
  const json& marginals = detail::require_field(j, "marginals", "");
  if (!marginals.is_array() || marginals.size() < 2)
    throw SchemaError("scenario: marginals must be an array with at least 2 entries");
  for (std::size_t i = 0; i < marginals.size(); ++i)
    s.marginals.push_back(detail::parse_marginal(marginals[i], i));
  if (s.phi.alphas.size() != s.marginals.size())
    throw SchemaError("scenario: phi.alphas length " + std::to_string(s.phi.alphas.size()) +
                      " does not match marginals length " + std::to_string(s.marginals.size()));

  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned()) throw SchemaError("scenario: seed must be a nonnegative integer");
    s.seed = v.get<std::uint64_t>();
  }
  if (j.contains("options")) {
    const json& o = j.at("options");
    if (!o.is_object()) throw SchemaError("scenario: options must be an object");
    if (o.contains("n_samples")) s.options.n_samples = o.at("n_samples").get<std::size_t>();
    if (o.contains("m")) s.options.m = o.at("m").get<std::size_t>();
    if (o.contains("trim")) s.options.trim = o.at("trim").get<double>();
    if (o.contains("tol")) s.options.tol = o.at("tol").get<double>();
    if (o.contains("max_sweeps")) s.options.max_sweeps = o.at("max_sweeps").get<int>();
    if (o.contains("schedule")) {
      for (const auto& v : o.at("schedule"))
        s.options.schedule.push_back(v.get<std::size_t>());
    }
    if (o.contains("method")) {
      const std::string m = o.at("method").get<std::string>();
      if (m != "auto") s.options.method = detail::parse_method(m);
    }
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("scenario: " + path + " is not valid JSON: " + e.what());
  }
  return parse_scenario(j);
}

inline MixProblem problem_of(const Scenario& s) { return MixProblem(s.marginals, s.phi); }

// Effective trim: explicit value wins; otherwise 0.001 when any marginal has
// infinite variance, 0 for light tails.
inline double effective_trim(const Scenario& s) {
  if (s.options.trim >= 0.0) return s.options.trim;
  for (const auto& d : s.marginals)
    if (!finite_variance(d)) return 0.001;
  return 0.0;
}

// ---------------------------------------------------------------------------
// Serialization.

inline json to_json(const CenterSet& c) {
  switch (c.kind) {
    case CenterSet::Kind::point: return {{"kind", "point"}, {"value", c.lo}};
    case CenterSet::Kind::interval: return {{"kind", "interval"}, {"lo", c.lo}, {"hi", c.hi}};
    case CenterSet::Kind::unknown: break;
  }
  return {{"kind", "unknown"}};
}

inline json marginal_to_json(const DistributionSpec& d) {
  json j{{"kind", kind_name(d)}};
  const auto& gen = generator_of(d);
  j["family"] = to_string(gen.family());
  if (gen.family() == GenFamily::student_t) j["df"] = gen.df();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Elliptical1D> || std::is_same_v<T, LogElliptical1D>) {
          j["mu"] = v.mu;
          j["sigma"] = v.sigma;
        } else {
          j["nu"] = v.nu;
          j["sigma"] = v.sigma;
        }
      },
      d);
  return j;
}

inline json phi_to_json(const PhiSpec& phi) {
  return {{"shape", to_string(phi.shape)},
          {"outer", to_string(phi.outer)},
          {"alphas", phi.alphas}};
}

// Reproducibility header embedded in every JSON output.
inline json repro_header(const Scenario& s) {
  return {{"tool_version", kVersion}, {"schema_version", kSchemaVersion}, {"scenario", s.raw}};
}

inline json to_json(const Decision& d) {
  return {{"verdict", to_string(d.verdict)},
          {"margin", d.margin},
          {"lhs", d.lhs},
          {"rhs", d.rhs},
          {"claim", d.claim == Claim::iff ? "iff" : "sufficient"},
          {"reduction", d.reduction}};
}

inline json to_json(const GaussianCert& cert) {
  std::vector<double> r_rows;
  r_rows.reserve(static_cast<std::size_t>(cert.R.size()));
  for (long i = 0; i < cert.R.rows(); ++i)
    for (long k = 0; k < cert.R.cols(); ++k) r_rows.push_back(cert.R(i, k));
  std::vector<double> w(cert.w.data(), cert.w.data() + cert.w.size());
  return {{"n", cert.R.rows()},
          {"r_row_major", r_rows},
          {"weights", w},
          {"iterations", cert.iterations},
          {"residual", cert.residual}};
}

inline json construction_to_json(const Construction& c) {
  json j{{"method", to_string(c.method)},
         {"center", to_json(c.center)},
         {"claim", c.claim == Claim::iff ? "iff" : "sufficient"},
         {"margin", c.margin},
         {"inner_constant", c.inner_constant},
         {"inner_abs", c.inner_abs},
         {"phi", phi_to_json(c.phi)}};
  json marginals = json::array();
  for (const auto& d : c.marginals) marginals.push_back(marginal_to_json(d));
  j["marginals"] = marginals;
  if (c.cert) j["certificate"] = to_json(*c.cert);
  if (!c.nus.empty()) j["nus"] = c.nus;
  if (c.inner) j["inner"] = construction_to_json(*c.inner);
  return j;
}

// Rebuilds a construction from its JSON image by re-running the deterministic
// builder on the embedded problem.
inline Construction construction_from_json(const json& j) {
  std::vector<DistributionSpec> marginals;
  const json& mj = detail::require_field(j, "marginals", "certificate");
  for (std::size_t i = 0; i < mj.size(); ++i)
    marginals.push_back(detail::parse_marginal(mj[i], i));
  PhiSpec phi = detail::parse_phi(detail::require_field(j, "phi", "certificate"));
  const Method method =
      detail::parse_method(detail::require_string(j, "method", "certificate"));
  return construct(MixProblem(std::move(marginals), std::move(phi)), method);
}

inline json to_json(const RAReport& r) {
  return {{"variance", r.variance},
          {"range", r.range},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

inline json to_json(const ProbeReport& r) {
  json points = json::array();
  for (const auto& p : r.points)
    points.push_back({{"m", p.m},
                      {"variance", p.variance},
                      {"range", p.range},
                      {"iterations", p.iterations},
                      {"converged", p.converged}});
  return {{"points", points},
          {"analytic_verdict", to_string(r.analytic)},
          {"margin", r.margin},
          {"trim", r.trim}};
}

inline json to_json(const ConstancyReport& r) {
  json j{{"center", r.center},
         {"max_deviation", r.max_deviation},
         {"tolerance", r.tolerance},
         {"pass", r.pass},
         {"n", r.n}};
  if (r.support_lo) j["signed_sum_min"] = *r.support_lo;
  if (r.support_hi) j["signed_sum_max"] = *r.support_hi;
  if (r.plus_fraction) j["plus_fraction"] = *r.plus_fraction;
  return j;
}

inline json to_json(const VerificationReport& r) {
  json moments = json::array();
  for (const auto& m : r.moment_checks) {
    json e{{"name", m.name}, {"pass", m.pass}, {"skipped", m.skipped}};
    if (m.skipped)
      e["reason"] = m.reason;
    else {
      e["expected"] = m.expected;
      e["observed"] = m.observed;
    }
    moments.push_back(e);
  }
  json j{{"ks_per_marginal", r.ks_per_marginal},
         {"ks_threshold", r.ks_threshold},
         {"ks_pass", r.ks_pass},
         {"constancy", to_json(r.constancy)},
         {"moment_checks", moments},
         {"moments_pass", r.moments_pass},
         {"n", r.n},
         {"seed", r.seed},
         {"pass", r.pass}};
  if (r.balance_pass) j["balance_pass"] = *r.balance_pass;
  return j;
}

inline json to_json(const ObstructionRecord& r) {
  return {{"nu", r.nu},
          {"sigma", r.sigma},
          {"family", r.family},
          {"t_first_nonpositive", r.t_first},
          {"rhs_at_first", r.rhs_at_first},
          {"t_witness", r.t_witness},
          {"rhs_min", r.rhs_min},
          {"grid_size", r.grid_size},
          {"lhs_positive_implied", r.lhs_positive_implied},
          {"custom_caveat", r.custom_caveat}};
}

}  // namespace mixkit
