// Command-line front end: scenario files in, verdicts / certificates /
// samples / reports out. Exit codes: 0 success, 2 mathematically-correct
// infeasibility, 1 anything else.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixkit/mixkit.hpp"

namespace {

using mixkit::json;

std::uint64_t parse_env_seed(const char* text) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (errno != 0 || end == text || *end != '\0')
    throw mixkit::Error(std::string("MIXKIT_SEED is not a nonnegative integer: ") + text);
  return static_cast<std::uint64_t>(v);
}

// Precedence: --seed flag, scenario field, MIXKIT_SEED, fresh random (printed).
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag,
                           std::optional<std::uint64_t> scenario_seed) {
  if (flag) return *flag;
  if (scenario_seed) return *scenario_seed;
  if (const char* env = std::getenv("MIXKIT_SEED")) return parse_env_seed(env);
  std::random_device rd;
  const std::uint64_t s =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::cerr << "mixkit: no seed given; drew seed " << s << "\n";
  return s;
}

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw mixkit::Error("cannot open output file: " + out_path);
  f << text;
}

void write_json(const json& j, const std::string& out_path) {
  write_text(j.dump(2) + "\n", out_path);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mixkit::Error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw mixkit::SchemaError(path + " is not valid JSON: " + std::string(e.what()));
  }
  return j;
}

struct CertFile {
  mixkit::Construction construction;
  json scenario_raw;  // null when the certificate carries no scenario
  std::optional<std::uint64_t> scenario_seed;
};

CertFile load_cert(const std::string& path) {
  const json j = load_json(path);
  const json& cj = j.contains("construction") ? j.at("construction") : j;
  CertFile cert{mixkit::construction_from_json(cj), json(), {}};
  if (j.contains("scenario")) {
    cert.scenario_raw = j.at("scenario");
    if (cert.scenario_raw.is_object() && cert.scenario_raw.contains("seed"))
      cert.scenario_seed = cert.scenario_raw.at("seed").get<std::uint64_t>();
  }
  return cert;
}

json header_for(const json& scenario_raw) {
  return {{"tool_version", mixkit::kVersion},
          {"schema_version", mixkit::kSchemaVersion},
          {"scenario", scenario_raw}};
}

std::optional<mixkit::Method> method_choice(const std::string& flag,
                                            const mixkit::Scenario& s) {
  if (!flag.empty() && flag != "auto") return mixkit::detail::parse_method(flag);
  return s.options.method;
}

void write_csv(const mixkit::Construction& c, std::size_t n, std::uint64_t seed,
               const std::string& out_path) {
  std::string text;
  text.reserve(n * 24 * (c.marginals.size() + 1));
  for (std::size_t i = 0; i < c.marginals.size(); ++i)
    text += "x" + std::to_string(i + 1) + ",";
  text += "phi\n";
  char buf[32];
  mixkit::MixSampler sampler(c, seed);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = sampler.draw();
    for (double v : row) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      text += buf;
      text += ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", c.phi(row));
    text += buf;
    text += '\n';
  }
  write_text(text, out_path);
}

// The rearrangement oracle flattens weighted sums, so map each problem to its
// additive core: log marginals to their log-scale images, two-bump tuples to
// the plus-branch elliptical tuple whose mixability drives the construction.
struct RAProblem {
  std::vector<mixkit::DistributionSpec> marginals;
  std::string domain;
};

RAProblem ra_problem_of(const mixkit::Scenario& s) {
  RAProblem p{{}, "sum"};
  bool log_scale = false, any_bump = false;
  for (const auto& d : s.marginals) {
    if (mixkit::positive_support(d)) log_scale = true;
    if (d.index() == 1 || d.index() == 3) any_bump = true;
  }
  std::vector<mixkit::DistributionSpec> additive;
  for (const auto& d : s.marginals)
    additive.push_back(log_scale ? mixkit::log_transform_inverse(d, 1.0) : d);
  if (any_bump) {
    for (std::size_t i = 0; i < additive.size(); ++i) {
      const auto& d = additive[i];
      if (const auto* tb = std::get_if<mixkit::TwoBump>(&d))
        p.marginals.emplace_back(
            mixkit::Elliptical1D(tb->nu, tb->sigma, tb->gen));
      else
        p.marginals.push_back(d);
    }
    p.domain = log_scale ? "log_switch_branch" : "switch_branch";
  } else {
    p.marginals = std::move(additive);
    p.domain = log_scale ? "log" : "sum";
  }
  return p;
}

json run_probe(const mixkit::Scenario& s, const std::vector<std::size_t>& schedule,
               double trim) {
  const auto p = ra_problem_of(s);
  const auto report =
      mixkit::mixability_probe(p.marginals, s.phi.alphas, schedule, trim, s.options.tol,
                               s.options.max_sweeps);
  json j = mixkit::to_json(report);
  j["domain"] = p.domain;
  j["tol"] = s.options.tol;
  j["max_sweeps"] = s.options.max_sweeps;
  return j;
}

const char* kScenarioSchema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "mixkit scenario",
  "description": "Input for all mixkit subcommands. schema_version 1.",
  "type": "object",
  "required": ["marginals", "phi"],
  "properties": {
    "marginals": {
      "type": "array",
      "minItems": 2,
      "items": {
        "type": "object",
        "required": ["kind", "family", "sigma"],
        "properties": {
          "kind": {"enum": ["elliptical", "two_bump", "log_elliptical", "log_two_bump"]},
          "family": {"enum": ["normal", "student_t", "cauchy", "laplace"]},
          "df": {"type": "number", "exclusiveMinimum": 0,
                 "description": "student_t only"},
          "mu": {"type": "number",
                 "description": "location; elliptical and log_elliptical kinds"},
          "nu": {"type": "number", "minimum": 0,
                 "description": "bump location; two_bump and log_two_bump kinds"},
          "sigma": {"type": "number", "exclusiveMinimum": 0}
        }
      }
    },
    "phi": {
      "type": "object",
      "required": ["shape", "outer", "alphas"],
      "properties": {
        "shape": {"enum": ["weighted_sum", "abs_weighted_sum",
                            "weighted_log_product", "abs_weighted_log_product"]},
        "outer": {"enum": ["identity", "square", "abs", "exp", "negate"]},
        "alphas": {"type": "array", "minItems": 2,
                    "items": {"type": "number", "exclusiveMinimum": 0}}
      }
    },
    "seed": {"type": "integer", "minimum": 0},
    "options": {
      "type": "object",
      "properties": {
        "n_samples": {"type": "integer", "minimum": 1, "default": 100000},
        "m": {"type": "integer", "minimum": 2, "default": 256},
        "trim": {"type": "number", "minimum": 0, "exclusiveMaximum": 0.5,
                  "description": "default: 0.001 for infinite-variance marginals, else 0"},
        "tol": {"type": "number", "minimum": 0, "default": 1e-12},
        "max_sweeps": {"type": "integer", "minimum": 1, "default": 1000},
        "schedule": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "method": {"enum": ["auto", "negation_pair", "gaussian_degenerate",
                             "scale_mixture", "bernoulli_switch", "product_mix"]}
      }
    }
  }
})";

// ---------------------------------------------------------------------------

int run_check(const std::string& scenario_path, const std::string& out) {
  const auto s = mixkit::load_scenario(scenario_path);
  const auto problem = mixkit::problem_of(s);
  const auto decision = mixkit::decide(problem);
  json j = header_for(s.raw);
  j["verdict"] = mixkit::to_string(decision.verdict);
  j["margin"] = decision.margin;
  j["lhs"] = decision.lhs;
  j["rhs"] = decision.rhs;
  j["claim"] = decision.claim == mixkit::Claim::iff ? "iff" : "sufficient";
  j["reduction"] = decision.reduction;
  j["center_set"] = mixkit::to_json(mixkit::center_set_for(problem));
  write_json(j, out);
  return decision.verdict == mixkit::Verdict::not_mixable ? 2 : 0;
}

int run_centers(const std::string& scenario_path, const std::string& out) {
  const auto s = mixkit::load_scenario(scenario_path);
  json j = header_for(s.raw);
  j["center_set"] = mixkit::to_json(mixkit::center_set_for(mixkit::problem_of(s)));
  write_json(j, out);
  return 0;
}

int run_construct(const std::string& scenario_path, const std::string& method,
                  const std::string& out) {
  const auto s = mixkit::load_scenario(scenario_path);
  const auto c = mixkit::construct(mixkit::problem_of(s), method_choice(method, s));
  json j = header_for(s.raw);
  j["construction"] = mixkit::construction_to_json(c);
  write_json(j, out);
  return 0;
}

int run_sample(const std::string& scenario_path, const std::string& cert_path,
               std::size_t n_flag, std::optional<std::uint64_t> seed_flag,
               const std::string& method, const std::string& out) {
  if (scenario_path.empty() == cert_path.empty())
    throw mixkit::Error("sample: give exactly one of --scenario and --cert");
  std::optional<mixkit::Construction> c;
  std::optional<std::uint64_t> scenario_seed;
  std::size_t n = n_flag;
  if (!cert_path.empty()) {
    auto cert = load_cert(cert_path);
    scenario_seed = cert.scenario_seed;
    c.emplace(std::move(cert.construction));
  } else {
    const auto s = mixkit::load_scenario(scenario_path);
    scenario_seed = s.seed;
    if (n == 0) n = s.options.n_samples;
    c.emplace(mixkit::construct(mixkit::problem_of(s), method_choice(method, s)));
  }
  if (n == 0) n = 100000;
  const std::uint64_t seed = resolve_seed(seed_flag, scenario_seed);
  write_csv(*c, n, seed, out);
  return 0;
}

int run_ra(const std::string& scenario_path, std::size_t m_flag, double trim_flag,
           std::vector<std::size_t> schedule_flag, const std::string& out) {
  const auto s = mixkit::load_scenario(scenario_path);
  const double trim = trim_flag >= 0.0 ? trim_flag : mixkit::effective_trim(s);
  std::vector<std::size_t> schedule =
      !schedule_flag.empty() ? std::move(schedule_flag) : s.options.schedule;
  json j = header_for(s.raw);
  j["trim"] = trim;
  if (!schedule.empty()) {
    j["probe"] = run_probe(s, schedule, trim);
  } else {
    const std::size_t m = m_flag > 0 ? m_flag : s.options.m;
    const auto p = ra_problem_of(s);
    auto q = mixkit::build_matrix(p.marginals, s.phi.alphas, m, trim);
    const auto report = mixkit::ra_minimize(q, s.options.tol, s.options.max_sweeps);
    j["m"] = m;
    j["tol"] = s.options.tol;
    j["max_sweeps"] = s.options.max_sweeps;
    j["domain"] = p.domain;
    j["ra"] = mixkit::to_json(report);
  }
  write_json(j, out);
  return 0;
}

int run_verify(const std::string& scenario_path, const std::string& cert_path,
               std::size_t n_flag, std::optional<std::uint64_t> seed_flag,
               const std::string& method, const std::string& out) {
  if (scenario_path.empty() == cert_path.empty())
    throw mixkit::Error("verify: give exactly one of --scenario and --cert");
  std::optional<mixkit::Construction> c;
  json scenario_raw;
  std::optional<std::uint64_t> scenario_seed;
  std::size_t n = n_flag;
  if (!cert_path.empty()) {
    auto cert = load_cert(cert_path);
    scenario_raw = cert.scenario_raw;
    scenario_seed = cert.scenario_seed;
    c.emplace(std::move(cert.construction));
  } else {
    const auto s = mixkit::load_scenario(scenario_path);
    scenario_raw = s.raw;
    scenario_seed = s.seed;
    if (n == 0) n = s.options.n_samples;
    c.emplace(mixkit::construct(mixkit::problem_of(s), method_choice(method, s)));
  }
  if (n == 0) n = 100000;
  const std::uint64_t seed = resolve_seed(seed_flag, scenario_seed);
  const auto report = mixkit::verify_construction(*c, n, seed);
  json j = header_for(scenario_raw);
  j["construction"] = mixkit::construction_to_json(*c);
  j["verification"] = mixkit::to_json(report);
  write_json(j, out);
  return report.pass ? 0 : 1;
}

int run_report(const std::string& scenario_path, std::optional<std::uint64_t> seed_flag,
               const std::string& method, const std::string& out) {
  const auto s = mixkit::load_scenario(scenario_path);
  const auto problem = mixkit::problem_of(s);
  const auto decision = mixkit::decide(problem);
  json j = header_for(s.raw);
  j["decision"] = mixkit::to_json(decision);
  j["center_set"] = mixkit::to_json(mixkit::center_set_for(problem));

  const double trim = mixkit::effective_trim(s);
  const std::vector<std::size_t> schedule =
      !s.options.schedule.empty() ? s.options.schedule : std::vector<std::size_t>{16, 64, 256};
  j["ra"] = run_probe(s, schedule, trim);

  if (decision.verdict == mixkit::Verdict::not_mixable) {
    j["infeasible"] = true;
    write_json(j, out);
    return 2;
  }

  const std::uint64_t seed = resolve_seed(seed_flag, s.seed);
  j["seed"] = seed;
  const auto c = mixkit::construct(problem, method_choice(method, s));
  j["construction"] = mixkit::construction_to_json(c);
  const auto verification = mixkit::verify_construction(c, s.options.n_samples, seed);
  j["verification"] = mixkit::to_json(verification);

  bool pass = verification.pass;
  for (const auto& d : s.marginals) {
    const auto* tb = std::get_if<mixkit::TwoBump>(&d);
    const auto* lb = std::get_if<mixkit::LogTwoBump>(&d);
    const double nu = tb ? tb->nu : lb ? lb->nu : 0.0;
    if (nu > 0.0) {
      const auto& gen = mixkit::generator_of(d);
      const auto record = mixkit::obstruction_witness(
          nu, mixkit::sigma_of(d), mixkit::CharGenerator::for_density(gen));
      j["obstruction"] = mixkit::to_json(record);
      break;
    }
  }

  j["pass"] = pass;
  write_json(j, out);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phi-mixability: decisions, centers, couplings, and verification\n"
               "for elliptical and log-elliptical marginals"};
  app.set_version_flag("--version", mixkit::kVersion);
  app.require_subcommand(1);

  std::string scenario_path, cert_path, out_path, method = "auto";
  std::size_t n_flag = 0, m_flag = 0;
  double trim_flag = -1.0;
  std::uint64_t seed_value = 0;
  std::vector<std::size_t> schedule_flag;

  auto add_scenario = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--scenario", scenario_path, "Scenario JSON file");
    if (required) opt->required();
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out,-o", out_path, "Output path (default: stdout)");
  };

  auto* check = app.add_subcommand("check", "Decide mixability and report the center set");
  add_scenario(check);
  add_out(check);

  auto* centers = app.add_subcommand("centers", "Report the certified center set");
  add_scenario(centers);
  add_out(centers);

  auto* construct = app.add_subcommand("construct", "Build a coupling certificate");
  add_scenario(construct);
  construct->add_option("--method", method,
                        "auto|negation_pair|gaussian_degenerate|scale_mixture|"
                        "bernoulli_switch|product_mix");
  add_out(construct);

  auto* sample = app.add_subcommand("sample", "Draw joint samples as CSV");
  add_scenario(sample, false);
  sample->add_option("--cert", cert_path, "Certificate JSON from `construct`");
  sample->add_option("-n", n_flag, "Number of draws");
  auto* sample_seed = sample->add_option("--seed", seed_value, "RNG seed");
  sample->add_option("--method", method, "Construction override (with --scenario)");
  add_out(sample);

  auto* ra = app.add_subcommand("ra", "Run the rearrangement oracle");
  add_scenario(ra);
  ra->add_option("-m", m_flag, "Grid rows");
  ra->add_option("--trim", trim_flag, "Tail probability trimmed per side");
  ra->add_option("--schedule", schedule_flag, "Grid schedule for a variance probe")
      ->delimiter(',');
  add_out(ra);

  auto* verify = app.add_subcommand("verify", "Statistically verify a coupling");
  add_scenario(verify, false);
  verify->add_option("--cert", cert_path, "Certificate JSON from `construct`");
  verify->add_option("-n", n_flag, "Number of draws");
  auto* verify_seed = verify->add_option("--seed", seed_value, "RNG seed");
  verify->add_option("--method", method, "Construction override (with --scenario)");
  add_out(verify);

  auto* report = app.add_subcommand("report", "Full pipeline: decide, construct, verify, probe");
  add_scenario(report);
  auto* report_seed = report->add_option("--seed", seed_value, "RNG seed");
  report->add_option("--method", method, "Construction override");
  add_out(report);

  auto* schema = app.add_subcommand("schema", "Print the scenario JSON schema");
  add_out(schema);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(scenario_path, out_path);
    if (centers->parsed()) return run_centers(scenario_path, out_path);
    if (construct->parsed()) return run_construct(scenario_path, method, out_path);
    if (sample->parsed())
      return run_sample(scenario_path, cert_path, n_flag,
                        sample_seed->count() ? std::optional<std::uint64_t>(seed_value)
                                             : std::nullopt,
                        method, out_path);
    if (ra->parsed()) return run_ra(scenario_path, m_flag, trim_flag, schedule_flag, out_path);
    if (verify->parsed())
      return run_verify(scenario_path, cert_path, n_flag,
                        verify_seed->count() ? std::optional<std::uint64_t>(seed_value)
                                             : std::nullopt,
                        method, out_path);
    if (report->parsed())
      return run_report(scenario_path,
                        report_seed->count() ? std::optional<std::uint64_t>(seed_value)
                                             : std::nullopt,
                        method, out_path);
    if (schema->parsed()) {
      write_text(std::string(kScenarioSchema) + "\n", out_path);
      return 0;
    }
  } catch (const mixkit::InfeasibilityError& e) {
    std::cerr << "mixkit: infeasible: " << e.what() << "; margin = " << e.margin << "\n";
    return 2;
  } catch (const mixkit::SchemaError& e) {
    std::cerr << "mixkit: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mixkit: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
