#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mixkit/couplings.hpp"
#include "mixkit/verify.hpp"
#include "test_support.hpp"

using namespace mixkit;

namespace {

PhiSpec sum_phi(std::vector<double> alphas, OuterFn outer = OuterFn::identity) {
  return PhiSpec(PhiShape::weighted_sum, outer, std::move(alphas));
}

std::vector<Elliptical1D> iid_marginals(std::size_t n, double sigma, const DensityGenerator& g) {
  return std::vector<Elliptical1D>(n, Elliptical1D(0.0, sigma, g));
}

double weighted_sum(const std::vector<double>& alphas, const std::vector<double>& row) {
  double s = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) s += alphas[i] * row[i];
  return s;
}

}  // namespace

TEST_CASE("gaussian_mix_correlation closed forms") {
  SECTION("equal weights give the equicorrelation matrix, no iterations") {
    const auto cert = gaussian_mix_correlation({1.0, 1.0, 1.0});
    REQUIRE(cert.iterations == 0);
    REQUIRE(cert.residual <= 1e-10);
    for (long i = 0; i < 3; ++i)
      for (long j = 0; j < 3; ++j) REQUIRE(cert.R(i, j) == (i == j ? 1.0 : -0.5));
    validate_certificate(cert);

    const auto cert4 = gaussian_mix_correlation({2.0, 2.0, 2.0, 2.0});
    for (long i = 0; i < 4; ++i)
      for (long j = 0; j < 4; ++j)
        REQUIRE(cert4.R(i, j) == Catch::Approx(i == j ? 1.0 : -1.0 / 3.0).margin(1e-15));
  }

  SECTION("boundary weights give the rank-one sign matrix exactly") {
    const auto cert = gaussian_mix_correlation({1.0, 1.0, 2.0});
    REQUIRE(cert.iterations == 0);
    const double expect[3][3] = {{1, 1, -1}, {1, 1, -1}, {-1, -1, 1}};
    for (long i = 0; i < 3; ++i)
      for (long j = 0; j < 3; ++j) REQUIRE(cert.R(i, j) == expect[i][j]);
    validate_certificate(cert);
  }

  SECTION("infeasible weights throw with the margin attached") {
    try {
      gaussian_mix_correlation({1.0, 1.0, 3.0});
      FAIL("expected InfeasibilityError");
    } catch (const InfeasibilityError& e) {
      REQUIRE(e.margin == Catch::Approx(-1.0).margin(1e-15));
    }
    REQUIRE_THROWS_AS(gaussian_mix_correlation({1.0}), ArityError);
    REQUIRE_THROWS_AS(gaussian_mix_correlation({1.0, -1.0, 3.0}), DomainError);
  }
}

TEST_CASE("alternating projections handles unequal interior weights") {
  for (const auto& w : std::vector<std::vector<double>>{
           {1.0, 2.0, 2.5}, {0.7, 1.1, 1.3, 2.0, 1.9}, {3.0, 1.0, 1.5, 1.0}}) {
    const auto cert = gaussian_mix_correlation(w);
    INFO("n = " << w.size());
    REQUIRE(cert.iterations > 0);
    REQUIRE(cert.residual <= 1e-10);
    validate_certificate(cert);
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<long>(w.size()));
    REQUIRE((cert.R * wv).cwiseAbs().maxCoeff() <= 1e-10 * wv.cwiseAbs().maxCoeff());
  }

  SECTION("validate_certificate rejects a tampered matrix") {
    auto cert = gaussian_mix_correlation({1.0, 2.0, 2.5});
    cert.R(0, 0) = 0.9;
    REQUIRE_THROWS_AS(validate_certificate(cert), NumericalError);
    auto cert2 = gaussian_mix_correlation({1.0, 2.0, 2.5});
    cert2.R(0, 1) += 0.3;  // breaks symmetry and R w = 0
    REQUIRE_THROWS_AS(validate_certificate(cert2), NumericalError);
  }
}

TEST_CASE("degenerate_loading reproduces R and annihilates w") {
  for (const auto& w : std::vector<std::vector<double>>{{1.0, 1.0, 1.0}, {1.0, 1.0, 2.0},
                                                        {1.0, 2.0, 2.5},
                                                        {0.7, 1.1, 1.3, 2.0, 1.9}}) {
    const auto cert = gaussian_mix_correlation(w);
    const Eigen::MatrixXd L = degenerate_loading(cert.R, cert.w);
    REQUIRE((cert.w.transpose() * L).cwiseAbs().maxCoeff() <=
            1e-13 * cert.w.cwiseAbs().maxCoeff());
    REQUIRE((L * L.transpose() - cert.R).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("scale_mixture_sampler certifies the weighted-sum constant") {
  const auto gen = DensityGenerator::normal();
  std::vector<Elliptical1D> marg{Elliptical1D(1.0, 1.0, gen), Elliptical1D(-0.5, 0.5, gen),
                                 Elliptical1D(2.0, 1.0, gen)};
  const auto c = make_elliptical_mix(marg, sum_phi({1.0, 2.0, 1.0}));
  REQUIRE(c.method == Method::gaussian_degenerate);
  REQUIRE(c.claim == Claim::iff);
  // margin of w = alpha*sigma = (1, 1, 1)
  REQUIRE(c.margin == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(c.inner_constant == Catch::Approx(1.0 + 2.0 * -0.5 + 2.0).margin(1e-15));
  REQUIRE(c.center.is_point());
  REQUIRE(c.center.value() == Catch::Approx(2.0).margin(1e-15));
  // every draw evaluates phi to the certified constant
  const auto rows = sample_rows(c, 200, 7);
  for (const auto& r : rows)
    REQUIRE(c.phi(r) == Catch::Approx(2.0).margin(1e-10));

  SECTION("non-normal families route to scale_mixture") {
    const auto t = make_elliptical_mix(iid_marginals(3, 1.0, DensityGenerator::student_t(3.0)),
                                       sum_phi({1.0, 1.0, 1.0}));
    REQUIRE(t.method == Method::scale_mixture);
    const auto l = make_elliptical_mix(iid_marginals(3, 1.0, DensityGenerator::laplace()),
                                       sum_phi({1.0, 1.0, 1.0}));
    REQUIRE(l.method == Method::scale_mixture);
  }

  SECTION("rejections") {
    REQUIRE_THROWS_AS(make_elliptical_mix(iid_marginals(3, 1.0, gen), sum_phi({1.0, 1.0})),
                      ArityError);
    std::vector<Elliptical1D> mixed{Elliptical1D(0.0, 1.0, gen),
                                    Elliptical1D(0.0, 1.0, DensityGenerator::cauchy())};
    REQUIRE_THROWS_AS(make_elliptical_mix(mixed, sum_phi({1.0, 1.0})), UnsupportedError);
    // square-summable custom generators have no mixing law to sample from
    std::vector<double> u{0.0, 0.5, 1.0}, f{1.0, 0.5, 0.0};
    const auto custom = DensityGenerator::custom(u, f);
    REQUIRE_THROWS_AS(make_elliptical_mix(iid_marginals(3, 1.0, custom), sum_phi({1, 1, 1})),
                      UnsupportedError);
  }
}

TEST_CASE("scale-mixture sampling meets the numeric gates") {
  SECTION("three standard cauchy coordinates sum to zero") {
    const auto c = make_elliptical_mix(iid_marginals(3, 1.0, DensityGenerator::cauchy()),
                                       sum_phi({1.0, 1.0, 1.0}));
    const auto rows = sample_rows(c, 10000, 99);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r[0] + r[1] + r[2]));
    REQUIRE(worst < 1e-8);
  }

  SECTION("boundary normals keep exact marginals under the rank-one coupling") {
    const auto gen = DensityGenerator::normal();
    std::vector<Elliptical1D> marg{Elliptical1D(0.0, 1.0, gen), Elliptical1D(0.0, 1.0, gen),
                                   Elliptical1D(0.0, 2.0, gen)};
    const auto c = make_elliptical_mix(marg, sum_phi({1.0, 1.0, 1.0}));
    const std::size_t n = 100000;
    const auto rows = sample_rows(c, n, 31337);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = rows[i][j];
      const double sigma = marg[j].sigma;
      const double d = testsupport::ks(
          col, [&](double x) { return cdf(DistributionSpec(marg[j]), x); });
      INFO("coordinate " << j << " sigma " << sigma);
      REQUIRE(d < ks_gate(n));
    }
    // rank-one structure: x1 = x2 and x3 = -2 x1 on every draw
    for (std::size_t i = 0; i < n; i += 997) {
      REQUIRE(rows[i][0] == Catch::Approx(rows[i][1]).margin(1e-10));
      REQUIRE(rows[i][2] == Catch::Approx(-2.0 * rows[i][0]).margin(1e-10));
    }
  }

  SECTION("t(3) coordinates reproduce the marginal variance") {
    const auto c = make_elliptical_mix(iid_marginals(3, 1.0, DensityGenerator::student_t(3.0)),
                                       sum_phi({1.0, 1.0, 1.0}));
    const std::size_t n = 1000000;
    MixSampler s(c, 777);
    std::vector<double> col;
    col.reserve(n);
    for (std::size_t i = 0; i < n; ++i) col.push_back(s.draw()[0]);
    const double v = testsupport::variance(col);
    REQUIRE(v == Catch::Approx(3.0).epsilon(0.05));  // Var t(3) = df/(df-2)
  }
}

TEST_CASE("bernoulli_switch pins the absolute weighted sum") {
  const auto gen = DensityGenerator::normal();

  SECTION("unit bumps: |x1+x2+x3| = 3 on every draw") {
    const auto c = bernoulli_switch({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, gen);
    REQUIRE(c.method == Method::bernoulli_switch);
    REQUIRE(c.inner_abs);
    REQUIRE(c.inner_constant == 3.0);
    REQUIRE(c.center.is_point());
    REQUIRE(c.center.value() == 3.0);
    REQUIRE(std::holds_alternative<TwoBump>(c.marginals[0]));
    REQUIRE(std::get<TwoBump>(c.marginals[0]).nu == 1.0);

    const auto rows = sample_rows(c, 4000, 20240817);
    std::size_t plus = 0;
    for (const auto& r : rows) {
      const double s = r[0] + r[1] + r[2];
      REQUIRE(std::abs(std::abs(s) - 3.0) < 1e-10);
      REQUIRE(s * s == Catch::Approx(9.0).margin(1e-9));
      if (s > 0) ++plus;
    }
    // fair switch: plus-branch frequency within 3 binomial Ses of 1/2
    const double freq = static_cast<double>(plus) / static_cast<double>(rows.size());
    REQUIRE(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / static_cast<double>(rows.size())));
  }

  SECTION("square outer certifies (sum)^2 = (sum nu)^2") {
    const auto phi = PhiSpec(PhiShape::weighted_sum, OuterFn::square, {1.0, 1.0, 1.0});
    const auto c = bernoulli_switch({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, gen, phi);
    REQUIRE(c.center.is_point());
    REQUIRE(c.center.value() == 9.0);
    for (const auto& r : sample_rows(c, 500, 5))
      REQUIRE(c.phi(r) == Catch::Approx(9.0).margin(1e-9));
  }

  SECTION("odd outer with a nonzero switch constant is not certifiable") {
    const auto phi = PhiSpec(PhiShape::weighted_sum, OuterFn::identity, {1.0, 1.0, 1.0});
    REQUIRE_THROWS_AS(
        bernoulli_switch({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, gen, phi),
        UnsupportedError);
  }

  SECTION("nu = 0 collapses to the plain elliptical mix constant 0") {
    const auto c = bernoulli_switch({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, gen);
    REQUIRE_FALSE(c.inner_abs);
    REQUIRE(c.center.value() == 0.0);
    for (const auto& r : sample_rows(c, 200, 9))
      REQUIRE(std::abs(r[0] + r[1] + r[2]) < 1e-10);
  }

  SECTION("mixed bump sizes add up") {
    const auto c = bernoulli_switch({1.0, 2.0, 3.0}, {2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}, gen);
    REQUIRE(c.inner_constant == 6.0);
    for (const auto& r : sample_rows(c, 200, 11))
      REQUIRE(std::abs(std::abs(r[0] + r[1] + r[2]) - 6.0) < 1e-9);
  }

  SECTION("rejections") {
    REQUIRE_THROWS_AS(bernoulli_switch({-1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, gen), DomainError);
    REQUIRE_THROWS_AS(bernoulli_switch({1.0, 1.0, 1.0}, {1.0, 1.0, 3.0}, {1.0, 1.0, 1.0}, gen),
                      InfeasibilityError);
    const auto logphi =
        PhiSpec(PhiShape::weighted_log_product, OuterFn::identity, {1.0, 1.0, 1.0});
    REQUIRE_THROWS_AS(
        bernoulli_switch({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, gen, logphi),
        UnsupportedError);
    const auto off = PhiSpec(PhiShape::abs_weighted_sum, OuterFn::identity, {1.0, 1.0, 2.0});
    REQUIRE_THROWS_AS(
        bernoulli_switch({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, gen, off),
        DomainError);
  }
}

TEST_CASE("product_mix exponentiates an additive mix") {
  const auto gen = DensityGenerator::normal();

  SECTION("three lognormals with product identically one") {
    auto inner = make_elliptical_mix(iid_marginals(3, 1.0, gen), sum_phi({1.0, 1.0, 1.0}));
    const auto c = product_mix(std::move(inner));
    REQUIRE(c.method == Method::product_mix);
    REQUIRE(c.phi.shape == PhiShape::weighted_log_product);
    REQUIRE(std::holds_alternative<LogElliptical1D>(c.marginals[0]));
    // phi evaluates the log-product inner, so identity outer certifies 0; the
    // raw coordinate product is e^0 = 1
    REQUIRE(c.center.is_point());
    REQUIRE(c.center.value() == 0.0);
    for (const auto& r : sample_rows(c, 2000, 4242)) {
      REQUIRE(r[0] > 0.0);
      REQUIRE(r[0] * r[1] * r[2] == Catch::Approx(1.0).margin(1e-8));
    }
  }

  SECTION("switch inside a product gives products e^{+-3}") {
    auto inner = bernoulli_switch({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, gen);
    const auto c = product_mix(std::move(inner));
    REQUIRE(c.phi.shape == PhiShape::abs_weighted_log_product);
    REQUIRE(std::holds_alternative<LogTwoBump>(c.marginals[0]));
    const auto rows = sample_rows(c, 10000, 808);
    std::size_t hi = 0;
    for (const auto& r : rows) {
      const double p = r[0] * r[1] * r[2];
      const bool top = std::abs(p - std::exp(3.0)) < 1e-6;
      const bool bot = std::abs(p - std::exp(-3.0)) < 1e-10;
      REQUIRE((top || bot));
      if (top) ++hi;
    }
    const double freq = static_cast<double>(hi) / static_cast<double>(rows.size());
    REQUIRE(std::abs(freq - 0.5) < 0.01 + 3.0 * std::sqrt(0.25 / 10000.0));
  }

  SECTION("log-cauchy product stays constant despite heavy tails") {
    auto inner = make_elliptical_mix(iid_marginals(3, 1.0, DensityGenerator::cauchy()),
                                     sum_phi({1.0, 1.0, 1.0}));
    const auto c = product_mix(std::move(inner));
    // a standard log-cauchy exceeds double range with probability ~1e-3 per
    // coordinate (exp overflows past ~709); constancy is checkable only on
    // rows that stayed representable
    std::size_t overflowed = 0;
    const auto rows = sample_rows(c, 2000, 17);
    for (const auto& r : rows) {
      bool ok = true;
      for (double v : r) ok = ok && std::isfinite(v) && v > 0.0;
      if (!ok) {
        ++overflowed;
        continue;
      }
      REQUIRE(std::log(r[0]) + std::log(r[1]) + std::log(r[2]) ==
              Catch::Approx(0.0).margin(1e-8));
    }
    REQUIRE(overflowed < rows.size() / 50);
  }

  SECTION("already-positive marginals cannot be exponentiated again") {
    auto inner = make_elliptical_mix(iid_marginals(3, 1.0, gen), sum_phi({1.0, 1.0, 1.0}));
    auto wrapped = product_mix(std::move(inner));
    REQUIRE_THROWS_AS(product_mix(std::move(wrapped)), DomainError);
  }
}

TEST_CASE("negation_pair couples a symmetric marginal with its mirror") {
  const auto gen = DensityGenerator::normal();

  SECTION("two-bump pair under a square outer centers at zero") {
    const auto phi = PhiSpec(PhiShape::weighted_sum, OuterFn::square, {1.0, 1.0});
    const auto c = negation_pair(DistributionSpec(TwoBump(1.0, 1.0, gen)), phi);
    REQUIRE(c.method == Method::negation_pair);
    REQUIRE(c.center.is_point());
    REQUIRE(c.center.value() == 0.0);
    for (const auto& r : sample_rows(c, 300, 3)) {
      REQUIRE(r[0] == -r[1]);
      REQUIRE(c.phi(r) == 0.0);
    }

    // contrast: the sign-switch coupling of the same marginals pins (sum)^2 at 4
    const auto sw = bernoulli_switch({1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, gen, phi);
    REQUIRE(sw.center.value() == 4.0);
    for (const auto& r : sample_rows(sw, 300, 3))
      REQUIRE(sw.phi(r) == Catch::Approx(4.0).margin(1e-9));
  }

  SECTION("centered elliptical pair sums to zero with exact marginal law") {
    const auto c = negation_pair(DistributionSpec(Elliptical1D(0.0, 2.0, gen)));
    REQUIRE(c.claim == Claim::iff);
    const std::size_t n = 20000;
    const auto rows = sample_rows(c, n, 21);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(rows[i][0] + rows[i][1] == 0.0);
      col[i] = rows[i][1];
    }
    const double d = testsupport::ks(col, [&](double x) {
      return cdf(DistributionSpec(Elliptical1D(0.0, 2.0, gen)), x);
    });
    REQUIRE(d < ks_gate(n));
  }

  SECTION("rejections") {
    REQUIRE_THROWS_AS(negation_pair(DistributionSpec(Elliptical1D(0.5, 1.0, gen))), DomainError);
    const auto uneq = PhiSpec(PhiShape::weighted_sum, OuterFn::identity, {1.0, 2.0});
    REQUIRE_THROWS_AS(negation_pair(DistributionSpec(Elliptical1D(0.0, 1.0, gen)), uneq),
                      DomainError);
    const auto logphi = PhiSpec(PhiShape::weighted_log_product, OuterFn::identity, {1.0, 1.0});
    REQUIRE_THROWS_AS(negation_pair(DistributionSpec(Elliptical1D(0.0, 1.0, gen)), logphi),
                      UnsupportedError);
  }
}

TEST_CASE("construct routes problems to the right coupling") {
  const auto gen = DensityGenerator::normal();

  SECTION("elliptical tuples: degenerate gaussian, iff claim, margin forwarded") {
    MixProblem p({DistributionSpec(Elliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(Elliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(Elliptical1D(0.0, 1.0, gen))},
                 sum_phi({1.0, 1.0, 1.0}));
    const auto c = construct(p);
    REQUIRE(c.method == Method::gaussian_degenerate);
    REQUIRE(c.claim == Claim::iff);
    const auto dec = decide(p);
    REQUIRE(c.margin == dec.margin);
    REQUIRE(c.claim == dec.claim);
  }

  SECTION("two-bump tuples: sign switch with nus scaled by alphas") {
    MixProblem p({DistributionSpec(TwoBump(1.0, 1.0, gen)),
                  DistributionSpec(TwoBump(0.5, 1.0, gen)),
                  DistributionSpec(TwoBump(1.0, 1.0, gen))},
                 PhiSpec(PhiShape::abs_weighted_sum, OuterFn::identity, {1.0, 2.0, 1.0}));
    const auto c = construct(p);
    REQUIRE(c.method == Method::bernoulli_switch);
    REQUIRE(c.nus == std::vector<double>{1.0, 1.0, 1.0});
    REQUIRE(c.inner_constant == 3.0);
    REQUIRE(c.marginals.size() == 3);
    REQUIRE(std::get<TwoBump>(c.marginals[1]).nu == 0.5);
    for (const auto& r : sample_rows(c, 100, 1))
      REQUIRE(std::abs(weighted_sum({1.0, 2.0, 1.0}, r)) == Catch::Approx(3.0).margin(1e-10));
  }

  SECTION("log-elliptical tuples: product wrapper around the additive core") {
    MixProblem p({DistributionSpec(LogElliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(LogElliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(LogElliptical1D(0.0, 1.0, gen))},
                 PhiSpec(PhiShape::weighted_log_product, OuterFn::exp, {1.0, 1.0, 1.0}));
    const auto c = construct(p);
    REQUIRE(c.method == Method::product_mix);
    REQUIRE(c.inner);
    REQUIRE(c.inner->method == Method::gaussian_degenerate);
    REQUIRE(std::holds_alternative<LogElliptical1D>(c.marginals[0]));
    for (const auto& r : sample_rows(c, 100, 2))
      REQUIRE(r[0] * r[1] * r[2] == Catch::Approx(1.0).margin(1e-8));
  }

  SECTION("infeasible tuples refuse construction") {
    MixProblem p({DistributionSpec(Elliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(Elliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(Elliptical1D(0.0, 3.0, gen))},
                 sum_phi({1.0, 1.0, 1.0}));
    REQUIRE_THROWS_AS(construct(p), InfeasibilityError);
  }

  SECTION("custom generators only support symmetric identical pairs") {
    std::vector<double> u{0.0, 0.5, 1.0}, f{1.0, 0.5, 0.0};
    const auto custom = DensityGenerator::custom(u, f);
    MixProblem pair({DistributionSpec(Elliptical1D(0.0, 1.0, custom)),
                     DistributionSpec(Elliptical1D(0.0, 1.0, custom))},
                    sum_phi({1.0, 1.0}));
    const auto c = construct(pair);
    REQUIRE(c.method == Method::negation_pair);
    for (const auto& r : sample_rows(c, 50, 4)) REQUIRE(r[0] + r[1] == 0.0);

    MixProblem triple({DistributionSpec(Elliptical1D(0.0, 1.0, custom)),
                       DistributionSpec(Elliptical1D(0.0, 1.0, custom)),
                       DistributionSpec(Elliptical1D(0.0, 1.0, custom))},
                      sum_phi({1.0, 1.0, 1.0}));
    REQUIRE_THROWS_AS(construct(triple), UnsupportedError);
  }

  SECTION("forcing an unsupported method throws") {
    MixProblem p({DistributionSpec(Elliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(Elliptical1D(0.0, 1.0, gen)),
                  DistributionSpec(Elliptical1D(0.0, 1.0, gen))},
                 sum_phi({1.0, 1.0, 1.0}));
    REQUIRE_THROWS_AS(construct(p, Method::negation_pair), UnsupportedError);
    MixProblem tb({DistributionSpec(TwoBump(1.0, 1.0, gen)),
                   DistributionSpec(TwoBump(1.0, 1.0, gen)),
                   DistributionSpec(TwoBump(1.0, 1.0, gen))},
                  PhiSpec(PhiShape::abs_weighted_sum, OuterFn::identity, {1.0, 1.0, 1.0}));
    REQUIRE_THROWS_AS(construct(tb, Method::gaussian_degenerate), UnsupportedError);
  }
}

TEST_CASE("samplers are deterministic in the seed") {
  const auto gen = DensityGenerator::student_t(3.0);
  const auto c = make_elliptical_mix(iid_marginals(3, 1.0, gen), sum_phi({1.0, 1.0, 1.0}));
  const auto a = sample_rows(c, 64, 123);
  const auto b = sample_rows(c, 64, 123);
  REQUIRE(a == b);
  const auto d = sample_rows(c, 64, 124);
  REQUIRE(a != d);

  // MixSampler::draw produces the same stream as sample_rows
  MixSampler s(c, 123);
  for (std::size_t i = 0; i < 8; ++i) REQUIRE(s.draw() == a[i]);
}
