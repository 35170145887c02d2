#pragma once

// Bayesian estimation of the HLG shape from a gos sample: likelihood and its
// theta-derivatives, maximum likelihood, gamma-prior posterior, Lindley
// approximation, random-walk Metropolis-Hastings and a quadrature oracle for
// the exact posterior expectations.
//
// With D_i = theta + (2 - theta) e^-x_i and q_i = (1 - e^-x_i) / D_i:
//   ln L = ln C_{n-1} + n ln theta + ((m+1)(n-1) + k) ln 2 - (m+1) sum_{i<n} x_i - k x_n
//          - (m+2) sum_{i<n} ln D_i - (k+1) ln D_n
//   L_t   = n/theta - (m+2) sum q_i - (k+1) q_n
//   L_tt  = -n/theta^2 + (m+2) sum q_i^2 + (k+1) q_n^2
//   L_ttt = 2n/theta^3 - 2(m+2) sum q_i^3 - 2(k+1) q_n^3

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "hlg/errors.hpp"
#include "hlg/gos.hpp"
#include "hlg/hlg_dist.hpp"
#include "hlg/quadrature.hpp"
#include "hlg/random.hpp"

namespace hlg {

/// Gamma prior with shape a and rate b.
struct Prior {
    double a = 2.0;
    double b = 1.0;

    void validate() const {
        if (!(a > 0.0 && b > 0.0)) {
            std::ostringstream os;
            os << "Prior: need a > 0 and b > 0 (a=" << a << ", b=" << b << ")";
            throw domain_error(os.str());
        }
    }
};

enum class LossFamily { sel, linex, ge };

struct LossSpec {
    LossFamily family = LossFamily::sel;
    double c = 0.0;

    static LossSpec sel() { return {LossFamily::sel, 0.0}; }
    static LossSpec linex(double c) { return {LossFamily::linex, c}; }
    static LossSpec ge(double c) { return {LossFamily::ge, c}; }

    void validate() const {
        if (family != LossFamily::sel && c == 0.0) throw domain_error("LossSpec: c must be nonzero for LINEX and GE");
        if (!std::isfinite(c)) throw domain_error("LossSpec: c must be finite");
    }
};

inline std::string to_string(LossFamily f) {
    switch (f) {
    case LossFamily::sel: return "sel";
    case LossFamily::linex: return "linex";
    case LossFamily::ge: return "ge";
    }
    return "?";
}

inline LossFamily parse_loss_family(const std::string& s) {
    if (s == "sel" || s == "SEL") return LossFamily::sel;
    if (s == "linex" || s == "LINEX") return LossFamily::linex;
    if (s == "ge" || s == "GE") return LossFamily::ge;
    throw domain_error("unknown loss family '" + s + "' (expected sel, linex or ge)");
}

struct McmcConfig {
    std::size_t chain_length = 100000;
    std::size_t burn_in = 10000;
    double proposal_sd = 0.05;
    std::uint64_t seed = 1;
    double init = 0.5;

    void validate() const {
        detail::require(chain_length >= 1, "McmcConfig: chain_length must be >= 1");
        detail::require(burn_in < chain_length, "McmcConfig: burn_in must be < chain_length");
        detail::require(proposal_sd > 0.0 && std::isfinite(proposal_sd), "McmcConfig: proposal_sd must be positive");
        detail::require(init > 0.0 && init < 1.0, "McmcConfig: init must lie in (0, 1)");
    }
};

/// Observed gos (x_1 <= ... <= x_n) under a scheme.
class GosSample {
public:
    GosSample(GosScheme scheme, std::vector<double> values) : scheme_(scheme), values_(std::move(values)) {
        if (values_.size() != static_cast<std::size_t>(scheme_.n())) {
            std::ostringstream os;
            os << "GosSample: " << values_.size() << " values for a scheme with n=" << scheme_.n();
            throw domain_error(os.str());
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
                throw domain_error("GosSample: values must be finite and nonnegative");
            if (i > 0 && values_[i] < values_[i - 1]) throw domain_error("GosSample: values must be nondecreasing");
        }
    }

    /// Sorts arbitrary positive data into an order-statistics sample.
    static GosSample order_statistics(std::vector<double> data) {
        std::sort(data.begin(), data.end());
        const int n = static_cast<int>(data.size());
        detail::require(n >= 1, "GosSample: empty data");
        return {GosScheme::order_statistics(n), std::move(data)};
    }

    const GosScheme& scheme() const noexcept { return scheme_; }
    const std::vector<double>& values() const noexcept { return values_; }
    int n() const noexcept { return scheme_.n(); }

private:
    GosScheme scheme_;
    std::vector<double> values_;
};

/// `corrected` is the likelihood derived from the gos density; `paper_literal`
/// carries theta^1 in place of theta^n.
enum class LikelihoodMode { corrected, paper_literal };

inline std::string to_string(LikelihoodMode m) { return m == LikelihoodMode::corrected ? "corrected" : "paper_literal"; }

/// Log-likelihood of theta with the data-dependent pieces precomputed.
class GosLikelihood {
public:
    explicit GosLikelihood(const GosSample& s, LikelihoodMode mode = LikelihoodMode::corrected)
        : mode_(mode), n_(s.n()), m_(s.scheme().m()), k_(s.scheme().k()) {
        const auto& x = s.values();
        em_.reserve(x.size());
        for (double v : x) em_.push_back(std::exp(-v));
        double sum_x = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) sum_x += x[i];
        constant_ = s.scheme().log_c(n_) + ((m_ + 1.0) * (n_ - 1) + k_) * std::log(2.0) - (m_ + 1.0) * sum_x -
                    k_ * x.back();
        theta_power_ = mode == LikelihoodMode::corrected ? static_cast<double>(n_) : 1.0;
    }

    LikelihoodMode mode() const noexcept { return mode_; }
    int n() const noexcept { return n_; }
    /// Exponent of theta in the likelihood (n, or 1 in paper-literal mode).
    double theta_power() const noexcept { return theta_power_; }

    double value(double th) const {
        check(th, "log_likelihood");
        double acc = constant_ + theta_power_ * std::log(th);
        for (std::size_t i = 0; i < em_.size(); ++i) acc -= weight(i) * std::log(th + (2.0 - th) * em_[i]);
        return acc;
    }

    /// d^j/dtheta^j ln L for j = 1, 2, 3.
    double derivative(double th, int j) const {
        check(th, "log_likelihood derivative");
        double acc = 0.0;
        for (std::size_t i = 0; i < em_.size(); ++i) {
            const double q = (1.0 - em_[i]) / (th + (2.0 - th) * em_[i]);
            acc += weight(i) * std::pow(q, j);
        }
        switch (j) {
        case 1: return theta_power_ / th - acc;
        case 2: return -theta_power_ / (th * th) + acc;
        case 3: return 2.0 * theta_power_ / (th * th * th) - 2.0 * acc;
        default: throw domain_error("log_likelihood derivative: order must be 1, 2 or 3");
        }
    }

    double score(double th) const { return derivative(th, 1); }
    double second(double th) const { return derivative(th, 2); }
    double third(double th) const { return derivative(th, 3); }

private:
    static void check(double th, const char* op) {
        if (!(th > 0.0 && th < 1.0)) {
            std::ostringstream os;
            os << op << ": theta must lie in (0, 1), got " << th;
            throw domain_error(os.str());
        }
    }
    double weight(std::size_t i) const { return i + 1 < em_.size() ? m_ + 2.0 : k_ + 1.0; }

    LikelihoodMode mode_;
    int n_;
    double m_;
    double k_;
    std::vector<double> em_;
    double constant_ = 0.0;
    double theta_power_ = 0.0;
};

inline double log_likelihood(const GosSample& s, double theta, LikelihoodMode mode = LikelihoodMode::corrected) {
    return GosLikelihood(s, mode).value(theta);
}

namespace detail {

inline constexpr double theta_lo = 1e-8;
inline constexpr double theta_hi = 1.0 - 1e-8;

// Global maximizer of f on [theta_lo, theta_hi]: log/linear grid scan, Brent
// refinement in the best bracket, then a root polish on df when it brackets.
template <class F, class DF>
double maximize_unit(F&& f, DF&& df, const char* what) {
    std::vector<double> grid;
    for (int i = 0; i <= 160; ++i) grid.push_back(theta_lo * std::pow(0.5 / theta_lo, i / 160.0));
    for (int i = 1; i <= 100; ++i) grid.push_back(0.5 + (theta_hi - 0.5) * i / 100.0);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    if (!std::isfinite(*mx)) throw numeric_error(std::string(what) + ": objective is not finite on the grid");
    if (*mx - *mn <= 1e-12 * std::max(1.0, std::fabs(*mx)))
        throw numeric_error(std::string(what) + ": objective is flat (degenerate data)");
    const std::size_t best = static_cast<std::size_t>(mx - vals.begin());
    if (best == 0 || best + 1 == grid.size()) {
        std::ostringstream os;
        os << what << ": maximizer lies on the boundary of [" << theta_lo << ", " << theta_hi
           << "]; use the quadrature oracle instead";
        throw numeric_error(os.str());
    }
    const double lo = grid[best - 1];
    const double hi = grid[best + 1];
    auto neg = [&](double t) { return -f(t); };
    double x = boost::math::tools::brent_find_minima(neg, lo, hi, std::numeric_limits<double>::digits / 2).first;
    const double dlo = df(lo);
    const double dhi = df(hi);
    if (dlo > 0.0 && dhi < 0.0) {
        std::uintmax_t iters = 200;
        auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-15 * std::max(1e-300, std::fabs(a)); };
        const auto br = boost::math::tools::toms748_solve(df, lo, hi, dlo, dhi, tol, iters);
        x = 0.5 * (br.first + br.second);
    }
    return x;
}

} // namespace detail

/// Maximum likelihood estimate on [1e-8, 1 - 1e-8]; boundary maximizers are errors.
inline double mle(const GosSample& s, LikelihoodMode mode = LikelihoodMode::corrected) {
    const GosLikelihood L(s, mode);
    return detail::maximize_unit([&](double t) { return L.value(t); }, [&](double t) { return L.score(t); }, "mle");
}

/// ln L + (a - 1) ln theta - b theta.
class PosteriorKernel {
public:
    PosteriorKernel(const GosSample& s, const Prior& prior, LikelihoodMode mode = LikelihoodMode::corrected)
        : like_(s, mode), prior_(prior) {
        prior_.validate();
    }

    double operator()(double th) const { return like_.value(th) + (prior_.a - 1.0) * std::log(th) - prior_.b * th; }
    double derivative(double th) const { return like_.score(th) + (prior_.a - 1.0) / th - prior_.b; }

    const GosLikelihood& likelihood() const noexcept { return like_; }
    const Prior& prior() const noexcept { return prior_; }

    /// Posterior mode; falls back to a grid argmax if the derivative never brackets.
    double mode() const {
        return detail::maximize_unit([&](double t) { return (*this)(t); }, [&](double t) { return derivative(t); },
                                     "posterior mode");
    }

private:
    GosLikelihood like_;
    Prior prior_;
};

inline double log_posterior_kernel(const GosSample& s, const Prior& prior, double theta,
                                   LikelihoodMode mode = LikelihoodMode::corrected) {
    return PosteriorKernel(s, prior, mode)(theta);
}

/// Posterior expectation targets: E[theta], E[exp(-c theta)], E[theta^-c].
enum class Integrand { identity, exp_neg_c, pow_neg_c };

inline Integrand integrand_for(LossFamily f) {
    switch (f) {
    case LossFamily::sel: return Integrand::identity;
    case LossFamily::linex: return Integrand::exp_neg_c;
    case LossFamily::ge: return Integrand::pow_neg_c;
    }
    return Integrand::identity;
}

namespace detail {

inline double integrand_value(Integrand w, double c, double th) {
    switch (w) {
    case Integrand::identity: return th;
    case Integrand::exp_neg_c: return std::exp(-c * th);
    case Integrand::pow_neg_c: return std::pow(th, -c);
    }
    return th;
}

// Breakpoints that resolve the posterior peak: mode +- multiples of its scale.
inline std::vector<double> posterior_breaks(const PosteriorKernel& k, double mode) {
    const double curv = -(k.likelihood().second(mode) - (k.prior().a - 1.0) / (mode * mode));
    const double sd = curv > 0.0 ? 1.0 / std::sqrt(curv) : 0.1;
    std::vector<double> br{0.0};
    for (int j = -12; j <= 12; j += 2) {
        const double b = mode + j * sd;
        if (b > 0.0 && b < 1.0) br.push_back(b);
    }
    if (br.size() == 1) br.push_back(mode);
    br.push_back(1.0);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
}

inline double log_integrand_value(Integrand w, double c, double th) {
    switch (w) {
    case Integrand::identity: return std::log(th);
    case Integrand::exp_neg_c: return -c * th;
    case Integrand::pow_neg_c: return -c * std::log(th);
    }
    return std::log(th);
}

// int_0^1 exp(log_w(theta) + kernel(theta) - shift) dtheta.
template <class LogW>
double integrate_posterior(const PosteriorKernel& k, double shift, const std::vector<double>& br, LogW&& log_w) {
    auto f = [&](double th) {
        if (th <= 0.0 || th >= 1.0) return 0.0;
        return std::exp(log_w(th) + k(th) - shift);
    };
    // the kernel is a sum of n logs, so its own rounding sets the attainable tolerance
    double total = quad::tanh_sinh(f, br[0], br[1], 1e-10).value;
    for (std::size_t i = 1; i + 2 < br.size(); ++i) total += quad::gauss_kronrod(f, br[i], br[i + 1], 1e-10, 15).value;
    total += quad::tanh_sinh(f, br[br.size() - 2], br.back(), 1e-10).value;
    return total;
}

inline double posterior_mode_or_grid(const PosteriorKernel& k) {
    try {
        return k.mode();
    } catch (const numeric_error&) {
        double best = 0.5, bv = -std::numeric_limits<double>::infinity();
        for (int i = 1; i < 1000; ++i) {
            const double t = i / 1000.0;
            if (const double v = k(t); v > bv) bv = v, best = t;
        }
        return best;
    }
}

} // namespace detail

/// Exact posterior expectation of the integrand by adaptive quadrature on (0, 1).
inline double posterior_expectation_quadrature(const GosSample& s, const Prior& prior, Integrand w, double c = 0.0,
                                               LikelihoodMode mode = LikelihoodMode::corrected) {
    const PosteriorKernel k(s, prior, mode);
    if (w == Integrand::pow_neg_c && c > 0.0) {
        const double margin = prior.a + k.likelihood().theta_power() - c;
        if (!(margin > 0.0)) {
            std::ostringstream os;
            os << "posterior_expectation_quadrature: E[theta^-c] diverges near 0 (a + n - c = " << margin << ")";
            throw domain_error(os.str());
        }
    }
    const double md = detail::posterior_mode_or_grid(k);
    const double shift = k(md);
    const auto br = detail::posterior_breaks(k, md);
    const double z = detail::integrate_posterior(k, shift, br, [](double) { return 0.0; });
    const double num =
        detail::integrate_posterior(k, shift, br, [&](double t) { return detail::log_integrand_value(w, c, t); });
    if (!(z > 0.0) || !std::isfinite(num)) throw numeric_error("posterior_expectation_quadrature: degenerate posterior");
    return num / z;
}

/// Applies the loss-specific back-transform to a posterior expectation.
inline double bayes_from_expectation(const LossSpec& loss, double e) {
    switch (loss.family) {
    case LossFamily::sel: return e;
    case LossFamily::linex:
        if (!(e > 0.0)) throw numeric_error("LINEX estimate: expectation of exp(-c theta) is not positive");
        return -std::log(e) / loss.c;
    case LossFamily::ge:
        if (!(e > 0.0)) throw numeric_error("GE estimate: expectation of theta^-c is not positive");
        return std::pow(e, -1.0 / loss.c);
    }
    return e;
}

/// Ground-truth Bayes estimator for the loss, via posterior_expectation_quadrature.
inline double bayes_estimate_quadrature(const GosSample& s, const Prior& prior, const LossSpec& loss,
                                        LikelihoodMode mode = LikelihoodMode::corrected) {
    loss.validate();
    return bayes_from_expectation(loss,
                                  posterior_expectation_quadrature(s, prior, integrand_for(loss.family), loss.c, mode));
}

/// Pieces of the Lindley expansion at the MLE.
struct LindleyTerms {
    double theta_hat = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
    double sigma = 0.0; // -1 / L_tt
    double p_theta = 0.0;
};

inline LindleyTerms lindley_terms(const GosSample& s, const Prior& prior, LikelihoodMode mode = LikelihoodMode::corrected) {
    prior.validate();
    const GosLikelihood L(s, mode);
    LindleyTerms t;
    t.theta_hat = mle(s, mode);
    t.l2 = L.second(t.theta_hat);
    t.l3 = L.third(t.theta_hat);
    if (!(t.l2 < 0.0)) {
        std::ostringstream os;
        os << "lindley_estimate: log-likelihood is not concave at the MLE (L_tt = " << t.l2 << ")";
        throw numeric_error(os.str());
    }
#ifndef NDEBUG
    {
        const double h = 1e-5 * std::min(t.theta_hat, 1.0 - t.theta_hat);
        const double fd2 = (L.score(t.theta_hat + h) - L.score(t.theta_hat - h)) / (2.0 * h);
        const double fd3 = (L.second(t.theta_hat + h) - L.second(t.theta_hat - h)) / (2.0 * h);
        if (std::fabs(fd2 - t.l2) > 1e-4 * std::fabs(t.l2) || std::fabs(fd3 - t.l3) > 1e-4 * std::fabs(t.l3))
            throw numeric_error("lindley_terms: analytic derivatives disagree with finite differences");
    }
#endif
    t.sigma = -1.0 / t.l2;
    t.p_theta = (prior.a - 1.0) / t.theta_hat - prior.b;
    return t;
}

/// w + (w_tt + 2 w_t p_t) sigma / 2 + L_ttt sigma^2 w_t / 2, then back-transformed.
inline double lindley_estimate(const GosSample& s, const Prior& prior, const LossSpec& loss,
                               LikelihoodMode mode = LikelihoodMode::corrected) {
    loss.validate();
    const auto t = lindley_terms(s, prior, mode);
    const double th = t.theta_hat;
    const double c = loss.c;
    double w = 0.0, w1 = 0.0, w2 = 0.0;
    switch (loss.family) {
    case LossFamily::sel: w = th, w1 = 1.0, w2 = 0.0; break;
    case LossFamily::linex:
        w = std::exp(-c * th);
        w1 = -c * w;
        w2 = c * c * w;
        break;
    case LossFamily::ge:
        w = std::pow(th, -c);
        w1 = -c * std::pow(th, -c - 1.0);
        w2 = c * (c + 1.0) * std::pow(th, -c - 2.0);
        break;
    }
    const double approx = w + 0.5 * (w2 + 2.0 * w1 * t.p_theta) * t.sigma + 0.5 * t.l3 * t.sigma * t.sigma * w1;
    return bayes_from_expectation(loss, approx);
}

/// A Metropolis-Hastings chain including burn-in.
struct McmcChain {
    std::vector<double> values;
    std::size_t burn_in = 0;
    std::size_t accepted = 0;

    double acceptance_rate() const {
        return values.empty() ? 0.0 : static_cast<double>(accepted) / static_cast<double>(values.size());
    }
    std::span<const double> post_burn_in() const {
        return std::span<const double>(values).subspan(std::min(burn_in, values.size()));
    }
};

/// Random-walk MH on (0, 1) targeting exp(kernel); deterministic given the seed.
inline McmcChain mh_chain(const GosSample& s, const Prior& prior, const McmcConfig& cfg,
                          LikelihoodMode mode = LikelihoodMode::corrected) {
    cfg.validate();
    const PosteriorKernel k(s, prior, mode);
    Engine eng(cfg.seed);
    NormalSource normal;
    McmcChain out;
    out.burn_in = cfg.burn_in;
    out.values.reserve(cfg.chain_length);
    double cur = cfg.init;
    double kcur = k(cur);
    for (std::size_t j = 0; j < cfg.chain_length; ++j) {
        const double prop = cur + cfg.proposal_sd * normal(eng);
        const double u = uniform_open(eng);
        if (prop > 0.0 && prop < 1.0) {
            const double kp = k(prop);
            if (std::log(u) < kp - kcur) {
                cur = prop;
                kcur = kp;
                ++out.accepted;
            }
        }
        out.values.push_back(cur);
    }
    return out;
}

/// Defaults: T = 1e5, burn-in 1e4, proposal sd 2.4 x posterior sd (0.05 if the
/// pilot quadrature fails), started at the MLE (posterior mode if no interior MLE).
inline McmcConfig default_mcmc_config(const GosSample& s, const Prior& prior, std::uint64_t seed,
                                      LikelihoodMode mode = LikelihoodMode::corrected) {
    McmcConfig cfg;
    cfg.seed = seed;
    try {
        const double m1 = posterior_expectation_quadrature(s, prior, Integrand::identity, 0.0, mode);
        const double m2 = posterior_expectation_quadrature(s, prior, Integrand::pow_neg_c, -2.0, mode);
        const double var = m2 - m1 * m1;
        if (var > 0.0 && std::isfinite(var)) cfg.proposal_sd = 2.4 * std::sqrt(var);
    } catch (const std::exception&) {
        cfg.proposal_sd = 0.05;
    }
    try {
        cfg.init = mle(s, mode);
    } catch (const numeric_error&) {
        cfg.init = detail::posterior_mode_or_grid(PosteriorKernel(s, prior, mode));
    }
    cfg.init = std::clamp(cfg.init, 1e-6, 1.0 - 1e-6);
    return cfg;
}

namespace detail {

inline double mean_of(std::span<const double> v, Integrand w, double c) {
    if (w == Integrand::exp_neg_c) {
        // log-mean-exp of -c theta
        double mx = -std::numeric_limits<double>::infinity();
        for (double t : v) mx = std::max(mx, -c * t);
        double acc = 0.0;
        for (double t : v) acc += std::exp(-c * t - mx);
        return std::exp(mx) * acc / static_cast<double>(v.size());
    }
    double acc = 0.0;
    for (double t : v) acc += integrand_value(w, c, t);
    return acc / static_cast<double>(v.size());
}

} // namespace detail

/// Loss-specific estimator from post-burn-in draws.
inline double mcmc_estimate(std::span<const double> chain, const LossSpec& loss) {
    loss.validate();
    if (chain.empty()) throw domain_error("mcmc_estimate: empty chain");
    if (loss.family == LossFamily::linex) {
        double mx = -std::numeric_limits<double>::infinity();
        for (double t : chain) mx = std::max(mx, -loss.c * t);
        double acc = 0.0;
        for (double t : chain) acc += std::exp(-loss.c * t - mx);
        return -(mx + std::log(acc / static_cast<double>(chain.size()))) / loss.c;
    }
    return bayes_from_expectation(loss, detail::mean_of(chain, integrand_for(loss.family), loss.c));
}

/// Batch-means Monte-Carlo standard error of mcmc_estimate (delta method for LINEX/GE).
inline double mcmc_standard_error(std::span<const double> chain, const LossSpec& loss) {
    loss.validate();
    detail::require(chain.size() >= 4, "mcmc_standard_error: chain too short");
    const Integrand w = integrand_for(loss.family);
    const std::size_t nb = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(chain.size()))));
    const std::size_t len = chain.size() / nb;
    std::vector<double> means(nb);
    for (std::size_t b = 0; b < nb; ++b) means[b] = detail::mean_of(chain.subspan(b * len, len), w, loss.c);
    double mu = 0.0;
    for (double m : means) mu += m;
    mu /= static_cast<double>(nb);
    double ss = 0.0;
    for (double m : means) ss += (m - mu) * (m - mu);
    const double se_w = std::sqrt(ss / static_cast<double>(nb - 1) / static_cast<double>(nb));
    const double e = detail::mean_of(chain, w, loss.c);
    switch (loss.family) {
    case LossFamily::sel: return se_w;
    case LossFamily::linex: return se_w / (std::fabs(loss.c) * e);
    case LossFamily::ge: return std::fabs(std::pow(e, -1.0 / loss.c - 1.0) / loss.c) * se_w;
    }
    return se_w;
}

/// One value per line with header `theta`.
inline void write_chain_csv(const std::string& path, std::span<const double> chain) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "theta\n";
    out.precision(17);
    for (double v : chain) out << v << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

} // namespace hlg
