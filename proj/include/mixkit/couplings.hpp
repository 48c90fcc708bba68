#pragma once

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/mixability.hpp"
#include "mixkit/rng.hpp"

namespace mixkit {

// ---------------------------------------------------------------------------
// Correlation certificates: R symmetric PSD with unit diagonal and R w = 0,
// so a centered Gaussian vector with correlation R has an almost-surely-zero
// weighted sum.

struct GaussianCert {
  Eigen::MatrixXd R;
  Eigen::VectorXd w;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

// Orthogonal projection onto the affine set {M : M w = 0} (symmetric part).
inline Eigen::MatrixXd project_null_w(const Eigen::MatrixXd& m, const Eigen::VectorXd& w) {
  const Eigen::VectorXd r = m * w;
  const double w2 = w.squaredNorm();
  return m - (r * w.transpose() + w * r.transpose()) / w2 +
         (w.dot(r) / (w2 * w2)) * (w * w.transpose());
}

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

// Builds a correlation matrix with R w = 0. Feasible exactly when
// sum(w) >= 2 max(w). Closed forms: equicorrelation -1/(n-1) when all w_i are
// equal, and the rank-one sign matrix at the boundary sum(w) = 2 max(w)
// (unique argmax for n >= 3 since the weights are positive). Otherwise
// alternating projections onto {PSD} (with Dykstra correction), {unit
// diagonal}, and {R w = 0}.
inline GaussianCert gaussian_mix_correlation(const std::vector<double>& w_in) {
  const std::size_t n = w_in.size();
  std::vector<double> ones(n, 1.0);
  const auto cond = check_condition(ones, w_in);  // validates n >= 2, w > 0
  if (cond.verdict == Verdict::not_mixable)
    throw InfeasibilityError(
        "gaussian_mix_correlation: sum(w) < 2 max(w); no correlation matrix with R w = 0 exists",
        cond.margin);

  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(w_in.data(), static_cast<long>(n));
  const long ln = static_cast<long>(n);
  GaussianCert cert;
  cert.w = w;

  const bool all_equal =
      *std::max_element(w_in.begin(), w_in.end()) == *std::min_element(w_in.begin(), w_in.end());
  if (all_equal) {
    const double off = -1.0 / static_cast<double>(n - 1);
    cert.R = Eigen::MatrixXd::Constant(ln, ln, off);
    cert.R.diagonal().setOnes();
  } else if (cond.verdict == Verdict::boundary) {
    Eigen::VectorXd s = Eigen::VectorXd::Ones(ln);
    long argmax = 0;
    w.maxCoeff(&argmax);
    s[argmax] = -1.0;
    cert.R = s * s.transpose();
  } else {
    Eigen::MatrixXd y = Eigen::MatrixXd::Identity(ln, ln);
    Eigen::MatrixXd correction = Eigen::MatrixXd::Zero(ln, ln);
    const double w_inf = w.cwiseAbs().maxCoeff();
    bool converged = false;
    for (int it = 1; it <= 10000; ++it) {
      const Eigen::MatrixXd pre = y - correction;
      Eigen::MatrixXd r = detail::project_psd(pre);
      correction = r - pre;
      const double viol = std::max((r * w).cwiseAbs().maxCoeff() / w_inf,
                                   (r.diagonal().array() - 1.0).abs().maxCoeff());
      cert.iterations = it;
      if (viol <= 1e-11) {
        cert.R = r;
        converged = true;
        break;
      }
      r.diagonal().setOnes();
      y = detail::project_null_w(r, w);
    }
    if (!converged) {
      const Eigen::MatrixXd& r = y;
      throw NumericalError(
          "gaussian_mix_correlation: no convergence after 10000 iterations; |Rw|_inf/|w|_inf = " +
          std::to_string((r * w).cwiseAbs().maxCoeff() / w_inf) +
          ", min eigenvalue = " + std::to_string(detail::min_eigenvalue(r)));
    }
  }

  cert.R = 0.5 * (cert.R + cert.R.transpose().eval());
  cert.R.diagonal().setOnes();
  const double w_inf = w.cwiseAbs().maxCoeff();
  cert.residual = std::max({(cert.R * w).cwiseAbs().maxCoeff() / w_inf,
                            std::max(0.0, -detail::min_eigenvalue(cert.R))});
  if (cert.residual > 1e-10)
    throw NumericalError("gaussian_mix_correlation: certificate residual " +
                         std::to_string(cert.residual) + " exceeds 1e-10");
  return cert;
}

inline void validate_certificate(const GaussianCert& cert) {
  if (cert.R.rows() != cert.R.cols() || cert.R.rows() != cert.w.size())
    throw ArityError("certificate: R and w dimensions disagree");
  if ((cert.R - cert.R.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NumericalError("certificate: R is not symmetric");
  if ((cert.R.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12)
    throw NumericalError("certificate: R does not have a unit diagonal");
  if (detail::min_eigenvalue(cert.R) < -1e-10)
    throw NumericalError("certificate: R has an eigenvalue below -1e-10");
  const double w_inf = cert.w.cwiseAbs().maxCoeff();
  if ((cert.R * cert.w).cwiseAbs().maxCoeff() > 1e-10 * w_inf)
    throw NumericalError("certificate: |R w|_inf exceeds 1e-10 |w|_inf");
}

// Rank-deficient square root L with L L' ~= R and w'L = 0 to machine
// precision: eigenvalues below 1e-12 are clamped to zero (Cholesky breaks
// down at the boundary), then the w-component of each column is removed so
// the sampled weighted sums are exactly degenerate, not just 1e-11-degenerate.
inline Eigen::MatrixXd degenerate_loading(const Eigen::MatrixXd& R, const Eigen::VectorXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NumericalError("degenerate_loading: certificate has an eigenvalue below -1e-10");
  Eigen::VectorXd vals = es.eigenvalues();
  for (long i = 0; i < vals.size(); ++i) vals[i] = vals[i] < 1e-12 ? 0.0 : vals[i];
  Eigen::MatrixXd loading = es.eigenvectors() * vals.cwiseSqrt().asDiagonal();
  const double w2 = w.squaredNorm();
  for (int pass = 0; pass < 2; ++pass)
    loading -= w * ((w.transpose() * loading) / w2);
  return loading;
}

// ---------------------------------------------------------------------------
// Mixing variable of the scale-mixture representation X = mu + sigma sqrt(W) Z:
// normal W = 1; t(df) W = df/chi2(df); cauchy W = 1/chi2(1); laplace W twice a
// unit-rate exponential (so Var = E[W] sigma^2 = 2 sigma^2, matching the
// elliptical scale convention). Consumes one uniform except for normal.
inline double draw_mixing_w(const CharGenerator& psi, SeedStream& stream) {
  switch (psi.family()) {
    case GenFamily::normal:
      return 1.0;
    case GenFamily::student_t: {
      const double chi2 = 2.0 * boost::math::gamma_p_inv(psi.df() / 2.0, stream.uniform01());
      return psi.df() / chi2;
    }
    case GenFamily::cauchy: {
      const double chi2 = 2.0 * boost::math::gamma_p_inv(0.5, stream.uniform01());
      return 1.0 / chi2;
    }
    case GenFamily::laplace:
      return -2.0 * std::log1p(-stream.uniform01());
    case GenFamily::custom:
      break;
  }
  throw UnsupportedError("draw_mixing_w: no mixing law for a custom generator");
}

// ---------------------------------------------------------------------------
// Constructions.

enum class Method { negation_pair, gaussian_degenerate, scale_mixture, bernoulli_switch, product_mix };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::negation_pair: return "negation_pair";
    case Method::gaussian_degenerate: return "gaussian_degenerate";
    case Method::scale_mixture: return "scale_mixture";
    case Method::bernoulli_switch: return "bernoulli_switch";
    case Method::product_mix: return "product_mix";
  }
  return "?";
}

// A constructed joint mix: declared marginals, the target phi, the certified
// constant, and whatever the sampler needs. `inner` holds the plus-branch mix
// of a Bernoulli switch or the additive mix under a product wrapper.
struct Construction {
  Method method;
  std::vector<DistributionSpec> marginals;
  PhiSpec phi;
  double inner_constant = 0.0;  // certified weighted sum; its |.| if inner_abs
  bool inner_abs = false;
  CenterSet center = CenterSet::unknown();
  Claim claim = Claim::sufficient;
  double margin = 0.0;

  std::optional<GaussianCert> cert;  // gaussian_degenerate / scale_mixture
  Eigen::MatrixXd loading;
  std::optional<CharGenerator> psi;
  std::vector<double> mus, sigmas;

  std::vector<double> nus;  // bernoulli_switch
  std::unique_ptr<Construction> inner;
};

// The constant phi takes given a constant inner value (or constant absolute
// value when the construction only pins |sum|).
inline CenterSet certified_center(const PhiSpec& phi, double inner_value, bool inner_abs) {
  if (phi.abs_inner())
    return CenterSet::point(apply_outer(phi.outer, std::abs(inner_value)));
  if (inner_abs && !outer_even(phi.outer) && inner_value != 0.0)
    throw UnsupportedError(
        "phi is not constant under a sign-switch construction; use an absolute-value "
        "inner or an even outer function");
  return CenterSet::point(apply_outer(phi.outer, inner_value));
}

namespace detail {

inline PhiSpec default_sum_phi(const Eigen::VectorXd& w, const std::vector<double>& sigmas) {
  std::vector<double> alphas(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) alphas[i] = w[static_cast<long>(i)] / sigmas[i];
  return PhiSpec(PhiShape::weighted_sum, OuterFn::identity, std::move(alphas));
}

}  // namespace detail

// Degenerate elliptical coupling X_i = mu_i + sigma_i sqrt(W) (L Z)_i with one
// mixing draw W shared by all coordinates, so each marginal is elliptical with
// generator psi and the weighted sum is constant. The weights are implied by
// the certificate: alpha_i = w_i / sigma_i.
inline Construction scale_mixture_sampler(GaussianCert cert, std::vector<double> mus,
                                        std::vector<double> sigmas, CharGenerator psi,
                                        std::optional<PhiSpec> phi = std::nullopt) {
  validate_certificate(cert);
  const std::size_t n = static_cast<std::size_t>(cert.w.size());
  if (mus.size() != n || sigmas.size() != n)
    throw ArityError("scale_mixture_sampler: mus/sigmas arity must match the certificate");
  if (!psi.psi_infty())
    throw UnsupportedError(
        "scale_mixture_sampler: generator lacks a completely monotone (psi_infty) "
        "characteristic generator");
  if (psi.family() == GenFamily::custom)
    throw UnsupportedError("scale_mixture_sampler: no sampling route for custom generators");
  for (double s : sigmas)
    if (!(s > 0.0)) throw DomainError("scale_mixture_sampler: sigmas must be > 0");

  Construction c{psi.family() == GenFamily::normal ? Method::gaussian_degenerate
                                                   : Method::scale_mixture,
                 {},
                 phi ? std::move(*phi) : detail::default_sum_phi(cert.w, sigmas)};
  if (c.phi.alphas.size() != n) throw ArityError("scale_mixture_sampler: phi arity mismatch");
  if (c.phi.log_scale())
    throw UnsupportedError("scale_mixture_sampler: phi must act on sums; wrap with product_mix");
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = c.phi.alphas[i] * sigmas[i];
    if (std::abs(wi - cert.w[static_cast<long>(i)]) > 1e-9 * std::max(1.0, wi))
      throw DomainError("scale_mixture_sampler: certificate weights disagree with alpha*sigma");
  }

  DensityGenerator gen = [&] {
    switch (psi.family()) {
      case GenFamily::normal: return DensityGenerator::normal();
      case GenFamily::student_t: return DensityGenerator::student_t(psi.df());
      case GenFamily::cauchy: return DensityGenerator::cauchy();
      case GenFamily::laplace: return DensityGenerator::laplace();
      case GenFamily::custom: break;
    }
    throw UnsupportedError("scale_mixture_sampler: custom generator");
  }();
  c.marginals.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    c.marginals.emplace_back(Elliptical1D(mus[i], sigmas[i], gen));

  double c0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) c0 += c.phi.alphas[i] * mus[i];
  c.inner_constant = c0;
  c.inner_abs = false;
  c.center = certified_center(c.phi, c0, false);
  c.claim = c.phi.injective() ? Claim::iff : Claim::sufficient;
  {
    std::vector<double> w_std(cert.w.data(), cert.w.data() + cert.w.size());
    std::vector<double> ones(n, 1.0);
    c.margin = check_condition(ones, w_std).margin;
  }
  c.loading = degenerate_loading(cert.R, cert.w);
  c.cert = std::move(cert);
  c.psi = psi;
  c.mus = std::move(mus);
  c.sigmas = std::move(sigmas);
  return c;
}

// Convenience: build the degenerate coupling straight from elliptical
// marginals and phi (certificate computed from w = alpha * sigma).
inline Construction make_elliptical_mix(const std::vector<Elliptical1D>& marginals,
                                      PhiSpec phi) {
  if (marginals.size() != phi.alphas.size())
    throw ArityError("make_elliptical_mix: arity mismatch");
  if (marginals.size() < 2) throw ArityError("make_elliptical_mix: need n >= 2");
  for (const auto& m : marginals)
    if (!(m.gen == marginals.front().gen))
      throw UnsupportedError("make_elliptical_mix: marginals must share one generator");
  std::vector<double> w(marginals.size()), mus(marginals.size()), sigmas(marginals.size());
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    mus[i] = marginals[i].mu;
    sigmas[i] = marginals[i].sigma;
    w[i] = phi.alphas[i] * sigmas[i];
  }
  const auto psi = CharGenerator::for_density(marginals.front().gen);
  return scale_mixture_sampler(gaussian_mix_correlation(w), std::move(mus), std::move(sigmas), psi,
                             std::move(phi));
}

// The sign-switch coupling: a fair bit picks between a plus branch Y with
// sum(alpha_i Y_i) = +sum(nu), Y_i ~ Elliptical(nu_i/alpha_i, sigma_i^2), and
// an independently drawn minus branch Z = -Y'. Marginals come out two-bump
// with bumps at +-nu_i/alpha_i and |sum(alpha_i X_i)| = sum(nu) on every draw.
inline Construction bernoulli_switch(const std::vector<double>& nus,
                                    const std::vector<double>& sigmas,
                                    const std::vector<double>& alphas, const DensityGenerator& gen,
                                    std::optional<PhiSpec> phi = std::nullopt) {
  const std::size_t n = nus.size();
  if (sigmas.size() != n || alphas.size() != n)
    throw ArityError("bernoulli_switch: nus/sigmas/alphas arity mismatch");
  for (double v : nus)
    if (!(v >= 0.0)) throw DomainError("bernoulli_switch: nus must be >= 0");
  const auto cond = check_condition(alphas, sigmas);  // validates n, positivity
  if (cond.verdict == Verdict::not_mixable)
    throw InfeasibilityError("bernoulli_switch: sum(alpha*sigma) < 2 max(alpha*sigma)",
                             cond.margin);
  if (!gen.unimodal())
    throw UnsupportedError("bernoulli_switch: density generator must be nonincreasing (unimodal law)");

  double nu_total = 0.0;
  for (double v : nus) nu_total += v;

  Construction c{Method::bernoulli_switch,
                 {},
                 phi ? std::move(*phi)
                     : PhiSpec(PhiShape::abs_weighted_sum, OuterFn::identity, alphas)};
  if (c.phi.alphas.size() != n) throw ArityError("bernoulli_switch: phi arity mismatch");
  if (c.phi.log_scale())
    throw UnsupportedError("bernoulli_switch: phi must act on sums; wrap with product_mix");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(c.phi.alphas[i] - alphas[i]) > 1e-12 * std::max(1.0, alphas[i]))
      throw DomainError("bernoulli_switch: phi.alphas disagree with alphas");

  std::vector<Elliptical1D> branch;
  branch.reserve(n);
  c.marginals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    branch.emplace_back(nus[i] / alphas[i], sigmas[i], gen);
    c.marginals.emplace_back(TwoBump(nus[i] / alphas[i], sigmas[i], gen));
  }
  c.inner = std::make_unique<Construction>(
      make_elliptical_mix(branch, PhiSpec(PhiShape::weighted_sum, OuterFn::identity, alphas)));

  c.nus = nus;
  c.inner_constant = nu_total;
  c.inner_abs = nu_total > 0.0;
  c.center = certified_center(c.phi, nu_total, c.inner_abs);
  c.claim = Claim::sufficient;
  c.margin = cond.margin;
  return c;
}

// Exponentiates an additive mix coordinatewise: sums become log-products and
// real-line marginals become their positive-support images.
inline Construction product_mix(Construction inner) {
  for (const auto& d : inner.marginals)
    if (positive_support(d))
      throw DomainError("product_mix: inner marginals must live on the real line");
  PhiSpec phi(inner.phi.abs_inner() ? PhiShape::abs_weighted_log_product
                                    : PhiShape::weighted_log_product,
              inner.phi.outer, inner.phi.alphas);
  Construction c{Method::product_mix, {}, std::move(phi)};
  c.marginals.reserve(inner.marginals.size());
  for (const auto& d : inner.marginals) c.marginals.push_back(log_transform(d, 1.0));
  c.inner_constant = inner.inner_constant;
  c.inner_abs = inner.inner_abs;
  c.center = certified_center(c.phi, c.inner_constant, c.inner_abs);
  c.claim = inner.claim;
  c.margin = inner.margin;
  c.inner = std::make_unique<Construction>(std::move(inner));
  return c;
}

// (X, -X) for a marginal symmetric about zero; the two weights must be equal.
inline Construction negation_pair(DistributionSpec d, std::optional<PhiSpec> phi = std::nullopt) {
  const bool symmetric = std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Elliptical1D>) return v.mu == 0.0;
        else if constexpr (std::is_same_v<T, TwoBump>) return true;
        else return false;
      },
      d);
  if (!symmetric)
    throw DomainError("negation_pair: marginal must be symmetric about 0");
  Construction c{Method::negation_pair,
                 {},
                 phi ? std::move(*phi)
                     : PhiSpec(PhiShape::weighted_sum, OuterFn::identity, {1.0, 1.0})};
  if (c.phi.alphas.size() != 2 || c.phi.alphas[0] != c.phi.alphas[1])
    throw DomainError("negation_pair: needs two equal weights");
  if (c.phi.log_scale())
    throw UnsupportedError("negation_pair: phi must act on sums; wrap with product_mix");
  c.marginals = {d, d};
  c.inner_constant = 0.0;
  c.inner_abs = false;
  c.center = certified_center(c.phi, 0.0, false);
  c.claim = c.phi.injective() ? Claim::iff : Claim::sufficient;
  c.margin = 0.0;
  return c;
}

// ---------------------------------------------------------------------------
// Auto-selection: route a feasible problem to the construction its marginals
// support.

inline Construction construct(const MixProblem& problem,
                              std::optional<Method> force = std::nullopt) {
  const auto dec = decide(problem);
  if (dec.verdict == Verdict::not_mixable)
    throw InfeasibilityError("construct: sum(alpha*sigma) < 2 max(alpha*sigma)", dec.margin);
  const std::size_t n = problem.arity();
  const DensityGenerator& gen = generator_of(problem.marginals.front());

  Construction c = [&]() -> Construction {
    if (force && *force == Method::negation_pair) {
      if (n != 2 || !(problem.marginals[0] == problem.marginals[1]))
        throw UnsupportedError("construct: negation_pair needs two identical marginals");
      return negation_pair(problem.marginals[0], problem.phi);
    }
    if (positive_support(problem.marginals.front())) {
      if (force && *force == Method::product_mix) force.reset();
      std::vector<DistributionSpec> inner_marginals;
      inner_marginals.reserve(n);
      for (const auto& d : problem.marginals)
        inner_marginals.push_back(log_transform_inverse(d, 1.0));
      PhiSpec inner_phi(problem.phi.abs_inner() ? PhiShape::abs_weighted_sum
                                                : PhiShape::weighted_sum,
                        problem.phi.outer, problem.phi.alphas);
      return product_mix(
          construct(MixProblem(std::move(inner_marginals), std::move(inner_phi)), force));
    }
    bool any_two_bump = false;
    for (const auto& d : problem.marginals)
      if (d.index() == 1) any_two_bump = true;
    if (any_two_bump || (force && *force == Method::bernoulli_switch)) {
      if (force && *force != Method::bernoulli_switch)
        throw UnsupportedError("construct: requested method does not fit these marginals");
      std::vector<double> nus(n), sigmas(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& d = problem.marginals[i];
        if (const auto* tb = std::get_if<TwoBump>(&d)) {
          nus[i] = problem.phi.alphas[i] * tb->nu;
          sigmas[i] = tb->sigma;
        } else {
          const auto& e = std::get<Elliptical1D>(d);
          if (e.mu != 0.0)
            throw UnsupportedError(
                "construct: a two-bump tuple admits elliptical members only when centered");
          nus[i] = 0.0;
          sigmas[i] = e.sigma;
        }
      }
      auto sw = bernoulli_switch(nus, sigmas, problem.phi.alphas, gen, problem.phi);
      sw.marginals = problem.marginals;  // keep the caller's elliptical/two-bump tags
      return sw;
    }
    std::vector<Elliptical1D> ell;
    ell.reserve(n);
    for (const auto& d : problem.marginals) ell.push_back(std::get<Elliptical1D>(d));
    if (gen.family() == GenFamily::custom) {
      if (force)  // negation_pair was handled above; nothing else samples a custom law
        throw UnsupportedError("construct: requested method does not fit these marginals");
      if (n == 2 && problem.marginals[0] == problem.marginals[1] &&
          problem.phi.alphas[0] == problem.phi.alphas[1] && ell[0].mu == 0.0)
        return negation_pair(problem.marginals[0], problem.phi);
      throw UnsupportedError(
          "construct: custom generators support only symmetric identical pairs");
    }
    auto mix = make_elliptical_mix(ell, problem.phi);
    if (force && *force != mix.method)
      throw UnsupportedError("construct: requested method does not fit these marginals");
    return mix;
  }();

  c.claim = dec.claim;
  c.margin = dec.margin;
  return c;
}

// ---------------------------------------------------------------------------
// Sampling. A sampler owns three child streams split from the seed: one for
// the switch bit, one for the plus/main branch, one for the minus branch; the
// branch not taken on a draw consumes nothing. Within a Gaussian-backed row
// the mixing draw W comes first, then one standard normal per coordinate.

class MixSampler {
 public:
  MixSampler(const Construction& c, std::uint64_t seed)
      : c_(&c),
        bits_(SeedStream(seed).split(0)),
        plus_(SeedStream(seed).split(1)),
        minus_(SeedStream(seed).split(2)) {}

  const Construction& construction() const { return *c_; }

  std::vector<double> draw() { return draw_node(*c_); }

 private:
  std::vector<double> draw_node(const Construction& c) {
    switch (c.method) {
      case Method::bernoulli_switch: {
        const bool plus = bits_.fair_bit();
        auto row = draw_single(*c.inner, plus ? plus_ : minus_);
        if (!plus)
          for (auto& v : row) v = -v;
        return row;
      }
      case Method::product_mix: {
        auto row = draw_node(*c.inner);
        for (auto& v : row) v = std::exp(v);
        return row;
      }
      default:
        return draw_single(c, plus_);
    }
  }

  // Single-stream methods only; a switch node never nests inside another.
  static std::vector<double> draw_single(const Construction& c, SeedStream& stream) {
    switch (c.method) {
      case Method::negation_pair: {
        const double x = mixkit::draw(c.marginals[0], stream);
        return {x, -x};
      }
      case Method::gaussian_degenerate:
      case Method::scale_mixture: {
        const double sw = std::sqrt(draw_mixing_w(*c.psi, stream));
        const long n = c.loading.rows();
        static const DensityGenerator kNormal = DensityGenerator::normal();
        Eigen::VectorXd z(n);
        for (long i = 0; i < n; ++i)
          z[i] = detail::std_quantile(kNormal, stream.uniform01());
        const Eigen::VectorXd g = c.loading * z;
        std::vector<double> row(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
          const auto k = static_cast<std::size_t>(i);
          row[k] = c.mus[k] + c.sigmas[k] * sw * g[i];
        }
        return row;
      }
      case Method::product_mix: {
        auto row = draw_single(*c.inner, stream);
        for (auto& v : row) v = std::exp(v);
        return row;
      }
      case Method::bernoulli_switch:
        break;
    }
    throw Error("draw_single: method needs the full sampler");
  }

  const Construction* c_;
  SeedStream bits_;
  SeedStream plus_;
  SeedStream minus_;
};

inline std::vector<std::vector<double>> sample_rows(const Construction& c, std::size_t n_draws,
                                                    std::uint64_t seed) {
  if (n_draws < 1) throw DomainError("sample_rows: need n_draws >= 1");
  MixSampler sampler(c, seed);
  std::vector<std::vector<double>> rows;
  rows.reserve(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) rows.push_back(sampler.draw());
  return rows;
}

}  // namespace mixkit
