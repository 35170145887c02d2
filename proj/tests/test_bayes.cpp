#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hlg/bayes.hpp"
#include "hlg/fit.hpp"
#include "hlg/gos.hpp"
#include "hlg/quadrature.hpp"

using namespace hlg;

namespace {

GosSample synthetic(const GosScheme& sch, double theta, std::uint64_t seed) {
    return {sch, sample_gos(sch, HlgParams(theta), seed)};
}

GosSample mortality() { return GosSample::order_statistics(mortality_nl().values); }
GosSample traction() { return GosSample::order_statistics(traction_age().values); }

double fd(const GosLikelihood& L, double th, int j) {
    const double h = 1e-5;
    auto g = [&](double t) { return j == 1 ? L.value(t) : L.derivative(t, j - 1); };
    return (g(th + h) - g(th - h)) / (2 * h);
}

} // namespace

TEST(Likelihood, TwoPointSchemeIntegratesToOne) {
    const GosScheme sch(2, 1.0, 2.0);
    const double th = 0.4;
    const double hi = upper_support(HlgParams(th), 1e-14);
    const double total = quad::gauss_kronrod(
                             [&](double x) {
                                 return quad::gauss_kronrod(
                                            [&](double y) { return std::exp(log_likelihood(GosSample(sch, {x, y}), th)); },
                                            x, hi, 1e-10)
                                     .value;
                             },
                             0.0, hi, 1e-10)
                             .value;
    EXPECT_NEAR(total, 1.0, 1e-7);
}

TEST(Likelihood, MatchesPairDensityForTwoPoints) {
    const GosScheme sch(2, 0.5, 1.5);
    for (double th : {0.1, 0.5, 0.9})
        for (auto [x, y] : {std::pair{0.2, 0.9}, std::pair{1.0, 1.0}, std::pair{0.0, 3.0}})
            EXPECT_NEAR(log_likelihood(GosSample(sch, {x, y}), th), std::log(joint_pdf(sch, 1, 2, HlgParams(th), x, y)),
                        1e-12);
}

TEST(Likelihood, OrderStatisticsReduceToIid) {
    const auto s = traction();
    for (double th : {0.05, 0.5, 0.95}) {
        double ref = std::lgamma(s.n() + 1.0);
        for (double x : s.values()) ref += std::log(pdf(HlgParams(th), x));
        EXPECT_NEAR(log_likelihood(s, th), ref, 1e-9);
    }
}

TEST(Likelihood, DerivativesMatchFiniteDifferences) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> th_dist(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        const GosScheme sch(8, trial % 3 == 0 ? -1.0 : 0.5 * (trial % 4), 1.0 + trial % 3);
        const auto s = synthetic(sch, th_dist(rng), derive_seed(3, trial));
        const GosLikelihood L(s);
        const double th = th_dist(rng);
        EXPECT_NEAR(L.score(th), fd(L, th, 1), 1e-6 * std::max(1.0, std::fabs(L.score(th))));
        EXPECT_NEAR(L.second(th), fd(L, th, 2), 1e-5 * std::max(1.0, std::fabs(L.second(th))));
        EXPECT_NEAR(L.third(th), fd(L, th, 3), 1e-5 * std::max(1.0, std::fabs(L.third(th))));
    }
}

TEST(Likelihood, PaperLiteralKeepsThetaToFirstPower) {
    const auto s = traction();
    const GosLikelihood a(s, LikelihoodMode::corrected), b(s, LikelihoodMode::paper_literal);
    EXPECT_EQ(a.theta_power(), 40.0);
    EXPECT_EQ(b.theta_power(), 1.0);
    for (double th : {0.2, 0.7}) EXPECT_NEAR(a.value(th) - b.value(th), 39.0 * std::log(th), 1e-9);
}

TEST(Mle, BuiltinDatasets) {
    EXPECT_NEAR(mle(mortality()), 0.0079, 5e-4);
    EXPECT_NEAR(mle(traction()), 0.5010, 5e-3);
}

TEST(Mle, ConsistentOnLargeSample) {
    const auto s = GosSample::order_statistics(sample(HlgParams(0.5), 2000, 99));
    const double th = mle(s);
    EXPECT_GT(th, 0.45);
    EXPECT_LT(th, 0.55);
    EXPECT_NEAR(GosLikelihood(s).score(th), 0.0, 1e-6);
}

TEST(Mle, BoundaryIsReported) {
    const auto s = GosSample::order_statistics(std::vector<double>(10, 1e-9));
    EXPECT_THROW(mle(s), numeric_error);
}

TEST(Posterior, FlatPriorLimit) {
    const auto s = traction();
    const Prior flat{1.0, 1e-12};
    for (double th : {0.1, 0.4, 0.8})
        EXPECT_NEAR(log_posterior_kernel(s, flat, th) - log_posterior_kernel(s, flat, 0.5),
                    log_likelihood(s, th) - log_likelihood(s, 0.5), 1e-9);
}

TEST(Posterior, KernelFiniteOnGrid) {
    const auto s = mortality();
    for (int i = 1; i < 1000; ++i) EXPECT_TRUE(std::isfinite(log_posterior_kernel(s, Prior{}, i / 1000.0)));
}

TEST(Posterior, PriorValidation) {
    EXPECT_THROW(bayes_estimate_quadrature(traction(), Prior{0.0, 1.0}, LossSpec::sel()), domain_error);
    EXPECT_THROW(bayes_estimate_quadrature(traction(), Prior{2.0, -1.0}, LossSpec::sel()), domain_error);
    EXPECT_THROW(bayes_estimate_quadrature(traction(), Prior{}, LossSpec::linex(0.0)), domain_error);
}

TEST(Posterior, GeDivergenceGuard) {
    const GosScheme sch(3, 0.0, 1.0);
    const auto s = synthetic(sch, 0.5, 1);
    EXPECT_THROW(bayes_estimate_quadrature(s, Prior{1.0, 1.0}, LossSpec::ge(4.5)), domain_error);
    EXPECT_NO_THROW(bayes_estimate_quadrature(s, Prior{1.0, 1.0}, LossSpec::ge(3.5)));
}

TEST(Posterior, LossOrdering) {
    const auto s = traction();
    const double sel = bayes_estimate_quadrature(s, Prior{}, LossSpec::sel());
    EXPECT_LT(bayes_estimate_quadrature(s, Prior{}, LossSpec::linex(2.0)), sel);
    EXPECT_GT(bayes_estimate_quadrature(s, Prior{}, LossSpec::linex(-2.0)), sel);
    EXPECT_NEAR(bayes_estimate_quadrature(s, Prior{}, LossSpec::ge(-1.0)), sel, 1e-10);
}

TEST(Lindley, CloseToQuadratureOnLargeSample) {
    const auto s = GosSample::order_statistics(sample(HlgParams(0.4), 500, 7));
    for (const auto& loss : {LossSpec::sel(), LossSpec::linex(1.0), LossSpec::ge(1.0)})
        EXPECT_NEAR(lindley_estimate(s, Prior{}, loss), bayes_estimate_quadrature(s, Prior{}, loss), 0.01)
            << to_string(loss.family);
}

TEST(Lindley, MortalityValue) {
    EXPECT_NEAR(lindley_estimate(mortality(), Prior{}, LossSpec::sel()), 0.01081, 5e-5);
    EXPECT_NEAR(bayes_estimate_quadrature(mortality(), Prior{}, LossSpec::sel()), 0.011352, 5e-6);
}

TEST(Lindley, TermsAtMle) {
    const auto t = lindley_terms(traction(), Prior{2.0, 1.0});
    EXPECT_LT(t.l2, 0.0);
    EXPECT_NEAR(t.sigma, -1.0 / t.l2, 1e-15);
    EXPECT_NEAR(t.p_theta, 1.0 / t.theta_hat - 1.0, 1e-12);
}

TEST(Mcmc, ChainStaysInUnitInterval) {
    const auto s = traction();
    const auto cfg = default_mcmc_config(s, Prior{}, 11);
    const auto ch = mh_chain(s, Prior{}, cfg);
    ASSERT_EQ(ch.values.size(), cfg.chain_length);
    for (double v : ch.values) {
        ASSERT_GT(v, 0.0);
        ASSERT_LT(v, 1.0);
    }
    EXPECT_GT(ch.acceptance_rate(), 0.1);
    EXPECT_LT(ch.acceptance_rate(), 0.9);
}

TEST(Mcmc, DeterministicGivenSeed) {
    const auto s = mortality();
    auto cfg = default_mcmc_config(s, Prior{}, 5);
    cfg.chain_length = 5000;
    cfg.burn_in = 500;
    EXPECT_EQ(mh_chain(s, Prior{}, cfg).values, mh_chain(s, Prior{}, cfg).values);
    cfg.seed = 6;
    auto other = cfg;
    other.seed = 7;
    EXPECT_NE(mh_chain(s, Prior{}, cfg).values, mh_chain(s, Prior{}, other).values);
}

TEST(Mcmc, MortalityPosteriorMean) {
    const auto s = mortality();
    const auto ch = mh_chain(s, Prior{}, default_mcmc_config(s, Prior{}, 2024));
    EXPECT_NEAR(mcmc_estimate(ch.post_burn_in(), LossSpec::sel()),
                bayes_estimate_quadrature(s, Prior{}, LossSpec::sel()), 0.002);
}

TEST(Mcmc, EstimatorIdentities) {
    const std::vector<double> constant(100, 0.3);
    for (const auto& loss : {LossSpec::sel(), LossSpec::linex(2.0), LossSpec::linex(-3.0), LossSpec::ge(0.5)})
        EXPECT_NEAR(mcmc_estimate(constant, loss), 0.3, 1e-12);

    const auto ch = mh_chain(traction(), Prior{}, default_mcmc_config(traction(), Prior{}, 3));
    const auto draws = ch.post_burn_in();
    const double sel = mcmc_estimate(draws, LossSpec::sel());
    EXPECT_NEAR(mcmc_estimate(draws, LossSpec::linex(1e-4)), sel, 1e-5);
    EXPECT_NEAR(mcmc_estimate(draws, LossSpec::linex(-1e-4)), sel, 1e-5);
    EXPECT_NEAR(mcmc_estimate(draws, LossSpec::ge(-1.0)), sel, 1e-12);
    double prev = 2.0;
    for (double c : {-3.0, -1.0, 0.5, 1.0, 3.0}) {
        const double e = mcmc_estimate(draws, LossSpec::linex(c));
        EXPECT_LT(e, prev);
        prev = e;
    }
}

TEST(Mcmc, AgreesWithQuadratureWithinMcse) {
    const auto s = traction();
    const auto ch = mh_chain(s, Prior{}, default_mcmc_config(s, Prior{}, 77));
    for (const auto& loss : {LossSpec::sel(), LossSpec::linex(1.5), LossSpec::ge(1.0)}) {
        const double est = mcmc_estimate(ch.post_burn_in(), loss);
        const double se = mcmc_standard_error(ch.post_burn_in(), loss);
        EXPECT_GT(se, 0.0);
        EXPECT_LT(std::fabs(est - bayes_estimate_quadrature(s, Prior{}, loss)), 4.0 * se) << to_string(loss.family);
    }
}

TEST(Mcmc, ChainCsvExport) {
    const std::vector<double> draws{0.25, 0.5, 0.125};
    const auto path = (std::filesystem::temp_directory_path() / "hlg_test_chain.csv").string();
    write_chain_csv(path, draws);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "theta");
    std::vector<double> back;
    while (std::getline(in, line)) back.push_back(std::stod(line));
    EXPECT_EQ(back, draws);
    std::filesystem::remove(path);
}
