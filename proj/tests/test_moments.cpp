#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "hlg/moments.hpp"

using namespace hlg;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

} // namespace

TEST(MarginalMgf, NormalizedOnSchemeGrid) {
    for (int n : {2, 4, 6})
        for (double m : {0.0, 0.5, 1.0})
            for (double k : {1.0, 2.0})
                for (double th : {0.2, 0.5, 0.8}) {
                    const GosScheme s(n, m, k);
                    const HlgParams p(th);
                    for (int r = 1; r <= n; ++r) EXPECT_NEAR(marginal_mgf(s, r, p, 0.0), 1.0, 1e-10);
                }
}

TEST(JointMgf, NormalizedOnSchemeGrid) {
    for (int n : {2, 4, 6})
        for (double m : {0.0, 0.5, 1.0})
            for (double k : {1.0, 2.0})
                for (double th : {0.2, 0.5, 0.8}) {
                    const GosScheme s(n, m, k);
                    const HlgParams p(th);
                    for (int r = 1; r < n; ++r)
                        for (int sd = r + 1; sd <= n; ++sd) EXPECT_NEAR(joint_mgf(s, r, sd, p, 0.0, 0.0), 1.0, 1e-8);
                }
}

TEST(MarginalMgf, FrozenValues) {
    EXPECT_NEAR(marginal_mgf(GosScheme(5, 0.5, 2.0), 3, HlgParams(0.4), 0.3), 1.51187859995544236, 1e-12);
    const double single = 2.0 / 1.5 * std::pow(1.0 / 3.0, -0.2) * inc_beta(0.75, 0.8, 1.2);
    EXPECT_NEAR(marginal_mgf(GosScheme::order_statistics(1), 1, HlgParams(0.5), 0.2), single, 1e-14);
    EXPECT_NEAR(single, 1.50525472755171700, 1e-14);
}

TEST(MarginalMgf, MatchesQuadrature) {
    const GosScheme s(5, 0.5, 2.0);
    const HlgParams p(0.4);
    for (double t : {-0.9, -0.5, 0.3, 1.5})
        EXPECT_LT(rel(marginal_mgf(s, 3, p, t), marginal_mgf_quadrature(s, 3, p, t)), 1e-7) << t;
}

TEST(MarginalMgf, QueryForm) {
    MgfQuery q{GosScheme(5, 0.5, 2.0), 3, 0, HlgParams(0.4), 0.3, 0.0, {}};
    EXPECT_EQ(marginal_mgf(q), marginal_mgf(q.scheme, 3, q.theta, 0.3));
    EXPECT_THROW(joint_mgf(q), domain_error);
}

TEST(MarginalMgf, DomainErrors) {
    const HlgParams p(0.5);
    EXPECT_THROW(marginal_mgf(GosScheme::k_records(3, 1.0), 2, p, 0.1), domain_error);
    EXPECT_THROW(marginal_mgf(GosScheme::order_statistics(3), 3, p, 1.0), domain_error);
    EXPECT_THROW(marginal_mgf(GosScheme::order_statistics(3), 1, p, -1.0), domain_error);
    EXPECT_THROW(marginal_mgf(GosScheme::order_statistics(3), 4, p, 0.0), domain_error);
    try {
        marginal_mgf(GosScheme(3, 0.0, 2.0), 3, p, 2.5);
        FAIL() << "expected a domain error";
    } catch (const domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("-0.5"), std::string::npos) << e.what();
    }
}

TEST(MarginalMgf, OrderStatisticsReduction) {
    for (int n : {1, 3, 7})
        for (double th : {0.1, 0.6})
            for (double t : {-0.7, 0.0, 0.4})
                for (int r = 1; r <= n; ++r) {
                    const HlgParams p(th);
                    EXPECT_NEAR(marginal_mgf(GosScheme::order_statistics(n), r, p, t), marginal_mgf_os(n, r, p, t), 1e-10);
                }
    for (double t : {-0.5, 0.2, 0.9})
        EXPECT_NEAR(marginal_mgf(GosScheme::order_statistics(1), 1, HlgParams(0.3), t), population_mgf(HlgParams(0.3), t),
                    1e-10);
}

TEST(JointMgf, FrozenValues) {
    EXPECT_NEAR(joint_mgf(GosScheme(4, 0.0, 1.0), 1, 2, HlgParams(0.5), 0.1, 0.15), 1.3205397282848283, 1e-10);
    EXPECT_NEAR(joint_mgf(GosScheme(4, 1.0, 2.0), 2, 4, HlgParams(0.3), 0.2, -0.1), 0.9759828213154623, 1e-10);
}

TEST(JointMgf, MatchesNestedQuadrature) {
    const HlgParams p(0.5);
    const auto s = GosScheme::order_statistics(4);
    EXPECT_LT(rel(joint_mgf(s, 1, 2, p, 0.1, 0.15), joint_mgf_quadrature(s, 1, 2, p, 0.1, 0.15)), 1e-5);
    const GosScheme g(5, 0.5, 1.0);
    EXPECT_LT(rel(joint_mgf(g, 2, 5, HlgParams(0.7), -0.3, 0.4), joint_mgf_quadrature(g, 2, 5, HlgParams(0.7), -0.3, 0.4)),
              1e-5);
}

TEST(JointMgf, OrderStatisticsReduction) {
    for (int n : {2, 4, 6})
        for (double th : {0.2, 0.9})
            for (int r = 1; r < n; ++r)
                for (int s = r + 1; s <= n; ++s) {
                    const HlgParams p(th);
                    EXPECT_NEAR(joint_mgf(GosScheme::order_statistics(n), r, s, p, 0.2, -0.3),
                                joint_mgf_os(n, r, s, p, 0.2, -0.3), 1e-10);
                }
}

TEST(JointMgf, Errors) {
    const HlgParams p(0.5);
    const auto s = GosScheme::order_statistics(4);
    EXPECT_THROW(joint_mgf(s, 2, 2, p, 0.0, 0.0), domain_error);
    EXPECT_THROW(joint_mgf(s, 1, 4, p, 0.0, 1.0), domain_error);
    EXPECT_THROW(joint_mgf(GosScheme::k_records(4, 2.0), 1, 2, p, 0.0, 0.0), domain_error);
    EXPECT_THROW(joint_mgf(s, 1, 2, p, 0.1, 0.1, SeriesControl{1e-14, 3}), numeric_error);
}

TEST(MarginalMoment, MatchesQuadratureAllOrders) {
    const GosScheme schemes[] = {GosScheme(5, 0.5, 2.0), GosScheme::order_statistics(10), GosScheme(6, 1.0, 1.0),
                                 GosScheme::order_statistics(1)};
    for (const auto& s : schemes)
        for (double th : {0.2, 0.5, 0.8})
            for (int r : {1, s.n()})
                for (int order = 1; order <= 4; ++order) {
                    const auto rep = marginal_moment(s, r, HlgParams(th), order);
                    EXPECT_LT(rep.abs_discrepancy / rep.oracle, 1e-5)
                        << s.n() << " " << s.m() << " " << s.k() << " th=" << th << " r=" << r << " p=" << order;
                    EXPECT_EQ(rep.oracle_kind, OracleKind::quadrature);
                }
}

TEST(MarginalMoment, FrozenOrderStatisticMeans) {
    const auto s = GosScheme::order_statistics(10);
    const HlgParams p(0.3);
    EXPECT_NEAR(marginal_moment(s, 1, p, 1).closed_form, 0.474757069007951563, 1e-8);
    EXPECT_NEAR(marginal_moment(s, 5, p, 1).closed_form, 1.89235224978551661, 1e-8);
    EXPECT_NEAR(marginal_moment(s, 10, p, 1).closed_form, 4.74245489660328644, 1e-8);
    EXPECT_NEAR(marginal_moment(GosScheme::order_statistics(1), 1, HlgParams(0.5), 1).abs_discrepancy, 0.0, 1e-6);
    EXPECT_NEAR(marginal_moment(GosScheme::order_statistics(1), 1, HlgParams(0.5), 2).closed_form, 5.17166778871122387,
                1e-7);
}

TEST(MarginalMoment, VariancePositive) {
    for (double th : {0.1, 0.5, 0.9}) {
        const auto s = GosScheme::order_statistics(1);
        const double m1 = marginal_moment(s, 1, HlgParams(th), 1).closed_form;
        const double m2 = marginal_moment(s, 1, HlgParams(th), 2).closed_form;
        EXPECT_GT(m2 - m1 * m1, 0.0);
    }
}

TEST(MarginalMoment, MonteCarloMaximum) {
    const auto rep = marginal_moment_mc(GosScheme::order_statistics(10), 10, HlgParams(0.3), 1, 1000000, 2024);
    EXPECT_EQ(rep.oracle_kind, OracleKind::monte_carlo);
    EXPECT_LT(rep.abs_discrepancy, 4.0 * rep.oracle_std_error);
}

TEST(MarginalMoment, OrderRange) {
    EXPECT_THROW(marginal_moment(GosScheme::order_statistics(3), 1, HlgParams(0.5), 5), domain_error);
    EXPECT_THROW(marginal_moment(GosScheme::order_statistics(3), 1, HlgParams(0.5), 0), domain_error);
}

TEST(JointMoment, MatchesNestedQuadrature) {
    const GosScheme s(4, 1.0, 2.0);
    const HlgParams p(0.3);
    for (int po : {1, 2})
        for (int qo : {1, 2}) {
            const auto rep = joint_moment(s, 2, 4, p, po, qo);
            EXPECT_LT(rep.abs_discrepancy / rep.oracle, 1e-5) << po << " " << qo;
        }
}

TEST(JointMoment, PositiveAssociationOfOrderStatistics) {
    const auto s = GosScheme::order_statistics(5);
    const HlgParams p(0.5);
    for (int r = 1; r < 5; ++r)
        for (int sd = r + 1; sd <= 5; ++sd) {
            const double exy = joint_moment(s, r, sd, p, 1, 1).closed_form;
            const double ex = marginal_moment(s, r, p, 1).closed_form;
            const double ey = marginal_moment(s, sd, p, 1).closed_form;
            EXPECT_GT(exy, ex * ey) << r << " " << sd;
        }
}

TEST(JointMoment, MonteCarloProduct) {
    const auto rep = joint_moment_mc(GosScheme::order_statistics(4), 1, 4, HlgParams(0.3), 1, 1, 1000000, 77);
    EXPECT_LT(rep.abs_discrepancy, 4.0 * rep.oracle_std_error);
}

TEST(JointMoment, OraclePathMarginalizes) {
    const GosScheme s(5, 0.5, 2.0);
    const HlgParams p(0.4);
    EXPECT_NEAR(joint_moment_quadrature(s, 2, 4, p, 1, 0), marginal_moment_quadrature(s, 2, p, 1), 1e-7);
    EXPECT_NEAR(joint_moment_quadrature(s, 2, 4, p, 0, 2), marginal_moment_quadrature(s, 4, p, 2), 1e-7);
}

TEST(MarginalRecurrence, MgfIdentityWithoutDifferentiation) {
    for (double m : {0.0, 0.5, 1.0})
        for (double k : {1.0, 2.0}) {
            if (k - m <= 0.0) continue;
            const SchemePair pr(GosScheme(4, m, k));
            for (int r = 1; r <= 4; ++r)
                EXPECT_LT(marginal_mgf_identity_residual(pr, r, HlgParams(0.5), 0.3), 1e-8) << m << " " << k << " " << r;
        }
}

TEST(MarginalRecurrence, DifferentiatedForm) {
    const SchemePair pr(GosScheme(4, 1.0, 2.0));
    const HlgParams p(0.5);
    EXPECT_LT(marginal_recurrence_residual(pr, 2, p, 1, 0.1), 1e-5);
    EXPECT_LT(marginal_moment_recurrence_residual(pr, 2, p, 1), 1e-5);
    EXPECT_LT(marginal_moment_recurrence_residual(pr, 2, p, 1, MomentSource::quadrature), 1e-8);
    for (int order = 0; order <= 2; ++order)
        for (int r = 1; r <= 4; ++r) {
            EXPECT_LT(marginal_recurrence_residual(pr, r, p, order, -0.2), 1e-4) << r << " " << order;
            EXPECT_LT(marginal_moment_recurrence_residual(pr, r, p, order), 1e-4) << r << " " << order;
        }
}

TEST(MarginalRecurrence, OrderStatisticsForm) {
    const HlgParams p(0.35);
    for (int n : {3, 6})
        for (int r = 1; r <= n; ++r) {
            const double lhs = marginal_moment(GosScheme::order_statistics(n + 1), r, p, 2).closed_form;
            EXPECT_NEAR(os_moment_recurrence_rhs(n, r, p, 1), lhs, 1e-6) << n << " " << r;
            const SchemePair pr(GosScheme::order_statistics(n));
            EXPECT_LT(marginal_moment_recurrence_residual(pr, r, p, 1), 1e-6);
        }
}

TEST(JointRecurrence, IdentityWithoutDifferentiation) {
    for (double m : {0.0, 0.5, 1.0}) {
        const SchemePair pr(GosScheme(4, m, 2.0));
        for (int r = 1; r < 4; ++r)
            for (int s = r + 1; s <= 4; ++s)
                EXPECT_LT(joint_mgf_identity_residual(pr, r, s, HlgParams(0.4), 0.1, 0.2), 1e-8) << m << r << s;
    }
}

TEST(JointRecurrence, OrderStatisticsMgfForm) {
    const int n = 5;
    const HlgParams p(0.6);
    const double th = p.theta();
    const double t1 = 0.2, t2 = -0.15;
    for (int r = 1; r < n; ++r)
        for (int s = r + 1; s <= n; ++s) {
            auto mj = [&](int nn, int ss) {
                return ss == r ? marginal_mgf_os(nn, r, p, t1 + t2) : joint_mgf_os(nn, r, ss, p, t1, t2);
            };
            const double lhs = t2 * mj(n, s);
            const double rhs = (n - s + 1.0) * (mj(n, s) - mj(n, s - 1)) -
                               (2.0 - th) / 2.0 * (n - s + 2.0) * (n - s + 1.0) / (n + 1.0) * (mj(n + 1, s) - mj(n + 1, s - 1));
            EXPECT_LT(std::fabs(lhs - rhs), 1e-4) << r << " " << s;
        }
}

TEST(JointRecurrence, DifferentiatedAndMomentForms) {
    const SchemePair pr(GosScheme(4, 1.0, 2.0));
    const HlgParams p(0.5);
    EXPECT_LT(joint_moment_recurrence_residual(pr, 1, 3, p, 1, 0, MomentSource::quadrature), 1e-4);
    EXPECT_LT(joint_moment_recurrence_residual(pr, 1, 3, p, 1, 0), 1e-4);
    EXPECT_LT(joint_recurrence_residual(pr, 1, 3, p, 1, 0, 0.05, -0.1), 1e-4);
    EXPECT_LT(joint_recurrence_residual(pr, 2, 4, p, 1, 1, 0.0, 0.0), 1e-4);
}

TEST(JointRecurrence, RearrangedOrderStatisticsCovarianceForm) {
    // p = 1, q = 0 solved for E[X(r) X(s)] in a sample of n + 1.
    const HlgParams p(0.45);
    const double th = p.theta();
    const int n = 4;
    auto mu11 = [&](int nn, int r, int s) {
        const auto sch = GosScheme::order_statistics(nn);
        return r == s ? marginal_moment(sch, r, p, 2).closed_form : joint_moment(sch, r, s, p, 1, 1).closed_form;
    };
    for (int r = 1; r < n; ++r)
        for (int s = r + 1; s <= n; ++s) {
            const double mu_r = marginal_moment(GosScheme::order_statistics(n), r, p, 1).closed_form;
            const double predicted =
                mu11(n + 1, r, s - 1) + 2.0 / (2.0 - th) * (n + 1.0) / ((n - s + 2.0) * (n - s + 1.0)) *
                                            ((n - s + 1.0) * (mu11(n, r, s) - mu11(n, r, s - 1)) - mu_r);
            EXPECT_NEAR(predicted, mu11(n + 1, r, s), 1e-5) << r << " " << s;
        }
}

TEST(Recurrence, RejectsRecordSchemes) {
    EXPECT_THROW(marginal_moment(GosScheme::k_records(3, 1.0), 1, HlgParams(0.5), 1), domain_error);
    EXPECT_THROW(joint_moment(GosScheme::k_records(3, 1.0), 1, 2, HlgParams(0.5), 1, 1), domain_error);
}
