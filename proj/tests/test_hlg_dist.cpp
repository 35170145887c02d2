#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hlg/hlg_dist.hpp"
#include "hlg/quadrature.hpp"

using namespace hlg;

TEST(HlgParams, OpenIntervalOnly) {
    EXPECT_THROW(HlgParams(0.0), domain_error);
    EXPECT_THROW(HlgParams(1.0), domain_error);
    EXPECT_THROW(HlgParams(-0.2), domain_error);
    EXPECT_NO_THROW(HlgParams(0.999999));
}

TEST(Cdf, Values) {
    EXPECT_EQ(cdf(HlgParams(0.4), 0.0), 0.0);
    EXPECT_NEAR(cdf(HlgParams(0.999999), std::log(3.0)), 0.49999974999987498, 1e-14);
    EXPECT_GT(cdf(HlgParams(0.3), 50.0), 1.0 - 1e-20 - 1e-16);
    EXPECT_LT(sf(HlgParams(0.3), 50.0), 1e-20);
    EXPECT_THROW(cdf(HlgParams(0.3), -1.0), domain_error);
}

TEST(Pdf, Values) {
    EXPECT_NEAR(pdf(HlgParams(0.6), 0.0), 0.3, 1e-15);
    EXPECT_NEAR(pdf(HlgParams(0.3), 1.0), 0.257752225799721006, 1e-15);
    const double e = std::exp(-1.3);
    EXPECT_NEAR(pdf(HlgParams(1.0 - 1e-9), 1.3), 2.0 * e / ((1.0 + e) * (1.0 + e)), 1e-8);
    EXPECT_THROW(pdf(HlgParams(0.3), -1e-9), domain_error);
}

TEST(Pdf, MatchesCdfDerivative) {
    for (double th : {0.1, 0.5, 0.9})
        for (double x = 0.05; x < 10.0; x += 0.37) {
            const HlgParams p(th);
            const double h = 1e-5;
            EXPECT_NEAR((cdf(p, x + h) - cdf(p, x - h)) / (2 * h), pdf(p, x), 1e-7);
        }
}

TEST(Pdf, SurvivalIdentity) {
    for (double th : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const HlgParams p(th);
        for (int i = 0; i < 100; ++i) {
            const double x = 20.0 * i / 99.0;
            const double s = sf(p, x);
            EXPECT_NEAR(pdf(p, x), s - (2.0 - th) / 2.0 * s * s, 1e-12);
        }
    }
}

TEST(Pdf, Normalized) {
    for (double th : {0.05, 0.5, 0.95}) {
        const HlgParams p(th);
        auto f = [&](double x) { return pdf(p, x); };
        EXPECT_NEAR(quad::gauss_kronrod_pieces(f, {0.0, 1.0, 5.0, 20.0, upper_support(p)}).value, 1.0, 1e-10);
    }
}

TEST(LogSf, FarTailIsFinite) {
    const HlgParams p(0.4);
    EXPECT_NEAR(log_sf(p, 800.0), std::log(2.0 / 0.4) - 800.0, 1e-12);
    EXPECT_GT(pdf(p, 800.0), -1.0);
    EXPECT_NEAR(log_sf(p, 699.9), log_sf(p, 700.1) + 0.2, 1e-9);
}

TEST(Quantile, Values) {
    EXPECT_EQ(quantile(HlgParams(0.5), 0.0), 0.0);
    EXPECT_NEAR(quantile(HlgParams(0.999999), 0.5), 1.09861295533522086, 1e-13);
    EXPECT_NEAR(quantile(HlgParams(0.3), 0.9), 4.11087386417331150, 1e-13);
    EXPECT_THROW(quantile(HlgParams(0.3), 1.0), domain_error);
    EXPECT_THROW(quantile(HlgParams(0.3), -0.1), domain_error);
}

TEST(Quantile, RoundTrips) {
    for (double th : {0.02, 0.3, 0.8})
        for (int i = 0; i < 200; ++i) {
            const HlgParams p(th);
            const double u = i / 200.0;
            EXPECT_NEAR(cdf(p, quantile(p, u)), u, 1e-12);
            const double x = 0.1 * i;
            EXPECT_NEAR(quantile(p, cdf(p, x)), x, 1e-12 * std::max(1.0, x) / std::max(1e-3, sf(p, x)));
        }
}

TEST(Sample, DeterministicGivenSeed) {
    const HlgParams p(0.5);
    EXPECT_EQ(sample(p, 1, 42), sample(p, 1, 42));
    EXPECT_EQ(sample(p, 100, 42), sample(p, 100, 42));
    EXPECT_NE(sample(p, 100, 42), sample(p, 100, 43));
    EXPECT_THROW(sample(p, 0, 1), domain_error);
}

TEST(Sample, MeanWithinFourStandardErrors) {
    const HlgParams p(0.5);
    const auto xs = sample(p, 1000000, 7);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (xs[i] - mean);
    }
    const double se = std::sqrt(m2 / (xs.size() - 1.0) / xs.size());
    EXPECT_LT(std::fabs(mean - 1.84839248149318749), 4.0 * se);
}
