#include <cstdio>

#include "hlg/hlg.hpp"

int main() {
    using namespace hlg;

    const HlgParams p(0.4);
    std::printf("pdf(1) = %.6f  cdf(1) = %.6f  median = %.6f\n", pdf(p, 1.0), cdf(p, 1.0), quantile(p, 0.5));

    // third order statistic of five, and the pair (2, 4)
    const auto os5 = GosScheme::order_statistics(5);
    const auto mean3 = marginal_moment(os5, 3, p, 1);
    std::printf("E[X(3:5)] = %.8f (quadrature %.8f)\n", mean3.closed_form, mean3.oracle);
    std::printf("E[X(2:5) X(4:5)] = %.8f\n", joint_moment(os5, 2, 4, p, 1, 1).closed_form);

    // a general scheme: n = 4, m = 1, k = 2
    const GosScheme g(4, 1.0, 2.0);
    std::printf("M_X(2)(0.3) = %.8f, recurrence residual %.1e\n", marginal_mgf(g, 2, p, 0.3),
                marginal_moment_recurrence_residual(SchemePair(g), 2, p, 1));

    // estimation on the traction-motor ages
    const auto data = traction_age();
    const auto sample = GosSample::order_statistics(data.values);
    const Prior prior{2.0, 1.0};
    std::printf("MLE %.5f  Lindley(SEL) %.5f  exact posterior mean %.5f\n", mle(sample),
                lindley_estimate(sample, prior, LossSpec::sel()),
                bayes_estimate_quadrature(sample, prior, LossSpec::sel()));

    const auto chain = mh_chain(sample, prior, default_mcmc_config(sample, prior, 42));
    const auto draws = chain.post_burn_in();
    std::printf("MCMC LINEX(c=1) %.5f +- %.5f (acceptance %.2f)\n", mcmc_estimate(draws, LossSpec::linex(1.0)),
                mcmc_standard_error(draws, LossSpec::linex(1.0)), chain.acceptance_rate());

    const auto fit = fit_report(data);
    std::printf("KS D = %.5f, p = %.4f (exact %.4f)\n", fit.ks_distance, fit.p_value, fit.p_value_exact);
}
