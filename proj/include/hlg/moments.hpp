#pragma once

// Closed-form marginal and joint moment generating functions of HLG gos,
// moments obtained from them by numerical differentiation, quadrature and
// Monte-Carlo oracles, and residuals of the recurrence relations.
//
// Marginal (m != -1):
//   M_r(t) = C_{r-1} / ((r-1)! (m+1)^(r-1))
//            * sum_u (-1)^u C(r-1,u) (2/(2-th))^g_{r-u} (th/(2-th))^-t B(1-th/2; g_{r-u}-t, 1+t)
// Joint (r < s, m != -1):
//   M_{r,s}(t1,t2) = C_{s-1} / ((r-1)! (s-r-1)! (m+1)^(s-2))
//            * sum_{u,v} (-1)^(u+v) C(r-1,u) C(s-r-1,v) (2/(2-th))^g_{r-u} (th/(2-th))^-(t1+t2)
//              / (g_{s-v} - t2) * sum_c (g_{s-v}+1)_c / (g_{s-v}-t2+1)_c
//              * B(1-th/2; g_{r-u} + c - t1 - t2, t1 + t2 + 2)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "hlg/errors.hpp"
#include "hlg/gos.hpp"
#include "hlg/hlg_dist.hpp"
#include "hlg/numdiff.hpp"
#include "hlg/quadrature.hpp"
#include "hlg/special_fn.hpp"

namespace hlg {

enum class OracleKind { quadrature, monte_carlo };

inline std::string to_string(OracleKind k) { return k == OracleKind::quadrature ? "quadrature" : "monte_carlo"; }

struct MomentReport {
    double closed_form = 0.0;
    double oracle = 0.0;
    double abs_discrepancy = 0.0;
    OracleKind oracle_kind = OracleKind::quadrature;
    double oracle_std_error = 0.0; // Monte-Carlo only

    static MomentReport make(double closed, double oracle, OracleKind kind, double se = 0.0) {
        return {closed, oracle, std::fabs(closed - oracle), kind, se};
    }
};

/// Series control used when MGFs are differentiated numerically; tighter
/// than the default so truncation jitter stays below the stencil noise.
inline SeriesControl derivative_series_control() { return {1e-15, 100000}; }

/// A marginal (s == 0) or joint (s > r) MGF evaluation request.
struct MgfQuery {
    GosScheme scheme;
    int r = 1;
    int s = 0;
    HlgParams theta;
    double t = 0.0;
    double t2 = 0.0;
    SeriesControl ctrl{};

    bool is_joint() const noexcept { return s != 0; }
};

namespace detail {

// The alternating sums below cancel terms much larger than their result, so
// they are evaluated in extended precision before rounding back to double.
using Wide = long double;

inline Wide ln_binom(int n, int k) {
    return ln_gamma<Wide>(n + 1.0L) - ln_gamma<Wide>(k + 1.0L) - ln_gamma<Wide>(n - k + 1.0L);
}

inline Wide ln_fact_w(int j) { return ln_gamma<Wide>(j + 1.0L); }

// sum_{i<=r} ln gamma_i in extended precision.
inline Wide log_c_w(const GosScheme& s, int r) {
    Wide acc = 0;
    for (int i = 1; i <= r; ++i) acc += std::log(static_cast<Wide>(s.k()) + (s.n() - i) * (static_cast<Wide>(s.m()) + 1));
    return acc;
}

inline Wide gamma_w(const GosScheme& s, int r) {
    return static_cast<Wide>(s.k()) + (s.n() - r) * (static_cast<Wide>(s.m()) + 1);
}

inline void require_not_records(const GosScheme& s, const char* op) {
    if (s.m() == -1.0) {
        std::ostringstream os;
        os << op << ": closed forms exclude m = -1 (record values)";
        throw domain_error(os.str());
    }
}

inline void check_marginal(const GosScheme& sch, int r, double t) {
    require_not_records(sch, "marginal_mgf");
    sch.check_rank(r);
    if (!(1.0 + t > 0.0)) {
        std::ostringstream os;
        os << "marginal_mgf: need 1 + t > 0, got t=" << t;
        throw domain_error(os.str());
    }
    for (int u = 0; u <= r - 1; ++u) {
        const double a = sch.gamma(r - u) - t;
        if (!(a > 0.0)) {
            std::ostringstream os;
            os << "marginal_mgf: gamma_" << (r - u) << " - t = " << a << " must be positive";
            throw domain_error(os.str());
        }
    }
}

inline void check_joint(const GosScheme& sch, int r, int s, double t1, double t2) {
    require_not_records(sch, "joint_mgf");
    sch.check_rank(r);
    sch.check_rank(s);
    if (!(r < s)) {
        std::ostringstream os;
        os << "joint_mgf: need r < s, got r=" << r << ", s=" << s;
        throw domain_error(os.str());
    }
    if (!(t1 + t2 + 2.0 > 0.0)) {
        std::ostringstream os;
        os << "joint_mgf: need t1 + t2 + 2 > 0, got t1=" << t1 << ", t2=" << t2;
        throw domain_error(os.str());
    }
    for (int v = 0; v <= s - r - 1; ++v) {
        const double a = sch.gamma(s - v) - t2;
        if (!(a > 0.0)) {
            std::ostringstream os;
            os << "joint_mgf: pole proximity, gamma_" << (s - v) << " - t2 = " << a << " must be positive";
            throw domain_error(os.str());
        }
    }
    for (int u = 0; u <= r - 1; ++u) {
        const double a = sch.gamma(r - u) - t1 - t2;
        if (!(a > 0.0)) {
            std::ostringstream os;
            os << "joint_mgf: gamma_" << (r - u) << " - t1 - t2 = " << a << " must be positive";
            throw domain_error(os.str());
        }
    }
}

// sum_c (g+1)_c / (g-t2+1)_c * B(z; a0 + c, b), accumulated in extended precision.
inline Wide joint_c_series(Wide g, Wide t2, Wide a0, Wide b, Wide z, const SeriesControl& ctrl) {
    Wide ratio = 1;
    Wide sum = 0;
    Wide prev_term = 0;
    for (std::size_t c = 0; c < ctrl.max_terms; ++c) {
        const Wide cc = static_cast<Wide>(c);
        if (c > 0) ratio *= (g + cc) / (g - t2 + cc);
        const Wide term = ratio * inc_beta<Wide>(z, a0 + cc, b);
        sum += term;
        if (c > 0 && std::fabs(term) <= static_cast<Wide>(ctrl.rel_tol) * std::fabs(sum)) {
            // Terms decay geometrically at rate z; anything slower means trouble.
            if (c > 10 && prev_term != 0 && std::fabs(term / prev_term) >= z + Wide(0.05)) {
                std::ostringstream os;
                os << "joint_mgf: c-series term ratio " << static_cast<double>(std::fabs(term / prev_term))
                   << " exceeds the expected geometric rate " << static_cast<double>(z);
                throw numeric_error(os.str());
            }
            return sum;
        }
        prev_term = term;
    }
    std::ostringstream os;
    os << "joint_mgf: c-series did not converge within " << ctrl.max_terms << " terms (partial sum "
       << static_cast<double>(sum) << ")";
    throw numeric_error(os.str());
}

} // namespace detail

/// Marginal MGF of the r-th gos.
inline double marginal_mgf(const GosScheme& sch, int r, const HlgParams& p, double t) {
    using detail::Wide;
    detail::check_marginal(sch, r, t);
    const Wide th = p.theta();
    const Wide tw = t;
    const Wide z = 1 - th / 2;
    const Wide ln_two_ratio = std::log(2 / (2 - th));
    const Wide ln_th_ratio = std::log(th / (2 - th));
    const Wide ln_pref = detail::log_c_w(sch, r) - detail::ln_fact_w(r - 1) -
                         (r - 1) * std::log(static_cast<Wide>(sch.m()) + 1);
    Wide sum = 0;
    for (int u = 0; u <= r - 1; ++u) {
        const Wide g = detail::gamma_w(sch, r - u);
        const Wide b = inc_beta<Wide>(z, g - tw, 1 + tw);
        const Wide mag = std::exp(ln_pref + detail::ln_binom(r - 1, u) + g * ln_two_ratio - tw * ln_th_ratio) * b;
        sum += (u % 2 == 0) ? mag : -mag;
    }
    return static_cast<double>(sum);
}

/// Joint MGF of (X(r), X(s)).
inline double joint_mgf(const GosScheme& sch, int r, int s, const HlgParams& p, double t1, double t2,
                        const SeriesControl& ctrl = {}) {
    using detail::Wide;
    ctrl.validate();
    detail::check_joint(sch, r, s, t1, t2);
    const Wide th = p.theta();
    const Wide z = 1 - th / 2;
    const Wide w1 = t1, w2 = t2;
    const Wide ln_two_ratio = std::log(2 / (2 - th));
    const Wide ln_th_ratio = std::log(th / (2 - th));
    const Wide ln_pref = detail::log_c_w(sch, s) - detail::ln_fact_w(r - 1) - detail::ln_fact_w(s - r - 1) -
                         (s - 2) * std::log(static_cast<Wide>(sch.m()) + 1);
    const Wide b = w1 + w2 + 2;
    Wide sum = 0;
    for (int u = 0; u <= r - 1; ++u) {
        const Wide gr = detail::gamma_w(sch, r - u);
        for (int v = 0; v <= s - r - 1; ++v) {
            const Wide gs = detail::gamma_w(sch, s - v);
            const Wide series = detail::joint_c_series(gs, w2, gr - w1 - w2, b, z, ctrl);
            const Wide mag = std::exp(ln_pref + detail::ln_binom(r - 1, u) + detail::ln_binom(s - r - 1, v) +
                                      gr * ln_two_ratio - (w1 + w2) * ln_th_ratio) /
                             (gs - w2) * series;
            sum += ((u + v) % 2 == 0) ? mag : -mag;
        }
    }
    return static_cast<double>(sum);
}

inline double marginal_mgf(const MgfQuery& q) {
    if (q.is_joint()) throw domain_error("marginal_mgf: query carries a second index");
    return marginal_mgf(q.scheme, q.r, q.theta, q.t);
}

inline double joint_mgf(const MgfQuery& q) {
    if (!q.is_joint()) throw domain_error("joint_mgf: query has no second index");
    return joint_mgf(q.scheme, q.r, q.s, q.theta, q.t, q.t2, q.ctrl);
}

// ---------------------------------------------------------------------------
// Order-statistics (m = 0, k = 1) and single-observation specializations.

/// M_{r:n}(t) = C_{r,n} sum_u (-1)^u C(r-1,u) (2/(2-th))^(n-r+u+1) (th/(2-th))^-t B(1-th/2; n-r+u+1-t, 1+t).
inline double marginal_mgf_os(int n, int r, const HlgParams& p, double t) {
    using detail::Wide;
    detail::require(1 <= r && r <= n, "marginal_mgf_os: need 1 <= r <= n");
    detail::require(1.0 + t > 0.0 && n - r + 1 - t > 0.0, "marginal_mgf_os: t outside the existence region");
    const Wide th = p.theta();
    const Wide tw = t;
    const Wide z = 1 - th / 2;
    const Wide ln_c = detail::ln_fact_w(n) - detail::ln_fact_w(r - 1) - detail::ln_fact_w(n - r);
    Wide sum = 0;
    for (int u = 0; u <= r - 1; ++u) {
        const Wide e = n - r + u + 1;
        const Wide mag = std::exp(ln_c + detail::ln_binom(r - 1, u) + e * std::log(2 / (2 - th)) -
                                  tw * std::log(th / (2 - th))) *
                         inc_beta<Wide>(z, e - tw, 1 + tw);
        sum += (u % 2 == 0) ? mag : -mag;
    }
    return static_cast<double>(sum);
}

/// Single-observation MGF (2/(2-th)) (th/(2-th))^-t B(1-th/2; 1-t, 1+t).
inline double population_mgf(const HlgParams& p, double t) {
    detail::require(t > -1.0 && t < 1.0, "population_mgf: need -1 < t < 1");
    const long double th = p.theta();
    const long double tw = t;
    return static_cast<double>(2 / (2 - th) * std::pow(th / (2 - th), -tw) * inc_beta<long double>(1 - th / 2, 1 - tw, 1 + tw));
}

/// Joint MGF of order statistics (r < s) in the corrected explicit form with
/// C_{r,s,n} = n! / ((r-1)! (s-r-1)! (n-s)!).
inline double joint_mgf_os(int n, int r, int s, const HlgParams& p, double t1, double t2,
                           const SeriesControl& ctrl = {}) {
    using detail::Wide;
    detail::require(1 <= r && r < s && s <= n, "joint_mgf_os: need 1 <= r < s <= n");
    detail::require(n - s + 1 - t2 > 0.0 && n - r + 1 - t1 - t2 > 0.0 && t1 + t2 + 2.0 > 0.0,
                    "joint_mgf_os: t outside the existence region");
    const Wide th = p.theta();
    const Wide z = 1 - th / 2;
    const Wide w1 = t1, w2 = t2;
    const Wide ln_c = detail::ln_fact_w(n) - detail::ln_fact_w(r - 1) - detail::ln_fact_w(s - r - 1) -
                      detail::ln_fact_w(n - s);
    Wide sum = 0;
    for (int u = 0; u <= r - 1; ++u) {
        for (int v = 0; v <= s - r - 1; ++v) {
            const Wide gs = n - s + v + 1;
            const Wide gr = n - r + u + 1;
            const Wide series = detail::joint_c_series(gs, w2, gr - w1 - w2, w1 + w2 + 2, z, ctrl);
            const Wide mag = std::exp(ln_c + detail::ln_binom(r - 1, u) + detail::ln_binom(s - r - 1, v) +
                                      gr * std::log(2 / (2 - th)) - (w1 + w2) * std::log(th / (2 - th))) /
                             (gs - w2) * series;
            sum += ((u + v) % 2 == 0) ? mag : -mag;
        }
    }
    return static_cast<double>(sum);
}

// ---------------------------------------------------------------------------
// Derivatives of the MGFs.

namespace detail {

// sqrt of 1 / sum_{i<=r} 1/gamma_i (at least 1): widens the difference step
// for ranks concentrated near zero, whose MGF varies on a longer t-scale.
inline double step_stretch(const GosScheme& sch, int r) {
    double inv = 0.0;
    for (int i = 1; i <= r; ++i) inv += 1.0 / sch.gamma(i);
    return std::sqrt(std::max(1.0, 1.0 / inv));
}

} // namespace detail

/// d^p/dt^p M_r(t); M_0 is identically 1.
inline double marginal_mgf_derivative(const GosScheme& sch, int r, const HlgParams& p, int order, double t) {
    if (r == 0) return order == 0 ? 1.0 : 0.0;
    auto f = [&](double tt) { return marginal_mgf(sch, r, p, tt); };
    return numdiff::derivative(f, t, order, numdiff::default_step(order, t) * detail::step_stretch(sch, r));
}

/// d^(p+q)/dt1^p dt2^q M_{r,s}(t1, t2); s == r collapses to M_r(t1 + t2).
inline double joint_mgf_derivative(const GosScheme& sch, int r, int s, const HlgParams& p, int p_ord, int q_ord,
                                   double t1, double t2) {
    if (s == r) return marginal_mgf_derivative(sch, r, p, p_ord + q_ord, t1 + t2);
    const SeriesControl ctrl = derivative_series_control();
    auto f = [&](double a, double b) { return joint_mgf(sch, r, s, p, a, b, ctrl); };
    const double h = numdiff::default_step(p_ord + q_ord, std::max(std::fabs(t1), std::fabs(t2))) *
                     detail::step_stretch(sch, s);
    return numdiff::mixed_derivative(f, t1, t2, p_ord, q_ord, h);
}

// ---------------------------------------------------------------------------
// Oracles.

namespace detail {

inline std::vector<double> oracle_breaks(const HlgParams& p) {
    const double hi = upper_support(p);
    std::vector<double> b{0.0};
    for (double x = 0.5; x < hi; x *= 2.0) b.push_back(x);
    b.push_back(hi);
    return b;
}

} // namespace detail

/// E[X(r)^p] by adaptive quadrature of x^p marginal_pdf over [0, x_hi].
inline double marginal_moment_quadrature(const GosScheme& sch, int r, const HlgParams& p, int order) {
    auto f = [&](double x) { return std::pow(x, order) * marginal_pdf(sch, r, p, x); };
    return quad::gauss_kronrod_pieces(f, detail::oracle_breaks(p), 1e-12).value;
}

/// E[e^(tX(r))] by adaptive quadrature.
inline double marginal_mgf_quadrature(const GosScheme& sch, int r, const HlgParams& p, double t) {
    auto f = [&](double x) { return std::exp(t * x) * marginal_pdf(sch, r, p, x); };
    return quad::gauss_kronrod_pieces(f, detail::oracle_breaks(p), 1e-12).value;
}

/// E[w(X(r), X(s))] by nested adaptive quadrature over {0 <= x <= y <= x_hi}.
template <class W>
double joint_expectation_quadrature(const GosScheme& sch, int r, int s, const HlgParams& p, W&& w,
                                    double rel_tol = 1e-10) {
    const double hi = upper_support(p);
    auto inner = [&](double x) {
        if (x >= hi) return 0.0;
        auto g = [&](double y) { return w(x, y) * joint_pdf(sch, r, s, p, x, y); };
        std::vector<double> br{x};
        for (double y = x + 0.5; y < hi; y = x + 2.0 * (y - x)) br.push_back(y);
        br.push_back(hi);
        return quad::gauss_kronrod_pieces(g, br, rel_tol).value;
    };
    return quad::gauss_kronrod_pieces(inner, detail::oracle_breaks(p), rel_tol).value;
}

inline double joint_mgf_quadrature(const GosScheme& sch, int r, int s, const HlgParams& p, double t1, double t2) {
    return joint_expectation_quadrature(sch, r, s, p, [&](double x, double y) { return std::exp(t1 * x + t2 * y); });
}

inline double joint_moment_quadrature(const GosScheme& sch, int r, int s, const HlgParams& p, int po, int qo) {
    return joint_expectation_quadrature(
        sch, r, s, p, [&](double x, double y) { return std::pow(x, po) * std::pow(y, qo); });
}

// ---------------------------------------------------------------------------
// Moments.

/// E[X(r)^p], p in 1..4: derivative of the closed-form MGF against quadrature.
inline MomentReport marginal_moment(const GosScheme& sch, int r, const HlgParams& p, int order) {
    detail::require_not_records(sch, "marginal_moment");
    detail::require(order >= 1 && order <= 4, "marginal_moment: order must be in 1..4");
    const double closed = marginal_mgf_derivative(sch, r, p, order, 0.0);
    const double oracle = marginal_moment_quadrature(sch, r, p, order);
    return MomentReport::make(closed, oracle, OracleKind::quadrature);
}

/// As marginal_moment but with a Monte-Carlo oracle from sample_gos.
inline MomentReport marginal_moment_mc(const GosScheme& sch, int r, const HlgParams& p, int order,
                                       std::size_t reps, std::uint64_t seed) {
    detail::require_not_records(sch, "marginal_moment_mc");
    detail::require(reps >= 2, "marginal_moment_mc: need at least 2 replications");
    const double closed = marginal_mgf_derivative(sch, r, p, order, 0.0);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto xs = sample_gos(sch, p, derive_seed(seed, i));
        const double v = std::pow(xs[static_cast<std::size_t>(r - 1)], order);
        const double d = v - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (v - mean);
    }
    const double se = std::sqrt(m2 / static_cast<double>(reps - 1) / static_cast<double>(reps));
    return MomentReport::make(closed, mean, OracleKind::monte_carlo, se);
}

/// E[X(r)^p X(s)^q], p, q in 0..2: mixed derivative of the joint MGF against
/// nested quadrature of the joint density.
inline MomentReport joint_moment(const GosScheme& sch, int r, int s, const HlgParams& p, int po, int qo) {
    detail::require_not_records(sch, "joint_moment");
    detail::require(po >= 0 && po <= 2 && qo >= 0 && qo <= 2 && po + qo >= 1,
                    "joint_moment: orders must be in 0..2 and not both zero");
    detail::require(r < s, "joint_moment: need r < s");
    const double closed = joint_mgf_derivative(sch, r, s, p, po, qo, 0.0, 0.0);
    const double oracle = joint_moment_quadrature(sch, r, s, p, po, qo);
    return MomentReport::make(closed, oracle, OracleKind::quadrature);
}

/// Joint moment with a Monte-Carlo oracle.
inline MomentReport joint_moment_mc(const GosScheme& sch, int r, int s, const HlgParams& p, int po, int qo,
                                    std::size_t reps, std::uint64_t seed) {
    detail::require_not_records(sch, "joint_moment_mc");
    detail::require(reps >= 2 && r < s, "joint_moment_mc: need r < s and reps >= 2");
    const double closed = joint_mgf_derivative(sch, r, s, p, po, qo, 0.0, 0.0);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto xs = sample_gos(sch, p, derive_seed(seed, i));
        const double v = std::pow(xs[static_cast<std::size_t>(r - 1)], po) * std::pow(xs[static_cast<std::size_t>(s - 1)], qo);
        const double d = v - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (v - mean);
    }
    const double se = std::sqrt(m2 / static_cast<double>(reps - 1) / static_cast<double>(reps));
    return MomentReport::make(closed, mean, OracleKind::monte_carlo, se);
}

// ---------------------------------------------------------------------------
// Recurrence relations. With g'_r = g_r + 1 the weight of the (n+1, m, k-m)
// scheme and C* = C_{r-1} / C'_{r-1}:
//
//   t M_r = g_r [M_r - M_{r-1}] - ((2-th)/2) g'_r C* [M'_r - M'_{r-1}]
//
// differentiated p+1 times in t, and the joint analogue in t2.

/// Where moment values come from when checking a recurrence.
enum class MomentSource { closed_form, quadrature };

/// |t M_r(t) - RHS| with no differentiation involved.
inline double marginal_mgf_identity_residual(const SchemePair& pair, int r, const HlgParams& p, double t) {
    const auto& a = pair.base;
    const auto& b = pair.shifted;
    const double th = p.theta();
    auto m_a = [&](int rr) { return rr == 0 ? 1.0 : marginal_mgf(a, rr, p, t); };
    auto m_b = [&](int rr) { return rr == 0 ? 1.0 : marginal_mgf(b, rr, p, t); };
    const double lhs = t * m_a(r);
    const double rhs = a.gamma(r) * (m_a(r) - m_a(r - 1)) -
                       (2.0 - th) / 2.0 * b.gamma(r) * pair.c_star(r) * (m_b(r) - m_b(r - 1));
    return std::fabs(lhs - rhs);
}

/// |M_r^(p)(t) - RHS| where the RHS uses (p+1)-th derivatives; p in 0..3.
inline double marginal_recurrence_residual(const SchemePair& pair, int r, const HlgParams& p, int order, double t) {
    detail::require(order >= 0 && order <= 3, "marginal_recurrence_residual: order must be in 0..3");
    detail::require(r >= 1, "marginal_recurrence_residual: need r >= 1");
    const auto& a = pair.base;
    const auto& b = pair.shifted;
    const double th = p.theta();
    const int q = order + 1;
    const double lhs = marginal_mgf_derivative(a, r, p, order, t);
    const double mq = marginal_mgf_derivative(a, r, p, q, t);
    const double rhs = a.gamma(r) / q * (mq - marginal_mgf_derivative(a, r - 1, p, q, t)) -
                       (2.0 - th) / 2.0 * b.gamma(r) * pair.c_star(r) / q *
                           (marginal_mgf_derivative(b, r, p, q, t) - marginal_mgf_derivative(b, r - 1, p, q, t)) -
                       t / q * mq;
    return std::fabs(lhs - rhs);
}

namespace detail {

inline double moment_value(const GosScheme& s, int r, const HlgParams& p, int order, MomentSource src) {
    if (order == 0) return 1.0;
    if (r == 0) return 0.0;
    return src == MomentSource::closed_form ? marginal_mgf_derivative(s, r, p, order, 0.0)
                                            : marginal_moment_quadrature(s, r, p, order);
}

} // namespace detail

/// Moment-form recurrence: |mu'_r^(p+1) - RHS|, with
///   mu'_r^(p+1) = mu'_{r-1}^(p+1)
///       - (2/(2-th)) g_r / (C* g'_r) [ (p+1)/g_r mu_r^p - mu_r^(p+1) + mu_{r-1}^(p+1) ].
inline double marginal_moment_recurrence_residual(const SchemePair& pair, int r, const HlgParams& p, int order,
                                                  MomentSource src = MomentSource::closed_form) {
    detail::require(order >= 0 && order <= 3, "marginal_moment_recurrence_residual: order must be in 0..3");
    const auto& a = pair.base;
    const auto& b = pair.shifted;
    const double th = p.theta();
    const int q = order + 1;
    const double lhs = detail::moment_value(b, r, p, q, src);
    const double rhs = detail::moment_value(b, r - 1, p, q, src) -
                       2.0 / (2.0 - th) * a.gamma(r) / (pair.c_star(r) * b.gamma(r)) *
                           (q / a.gamma(r) * detail::moment_value(a, r, p, order, src) -
                            detail::moment_value(a, r, p, q, src) + detail::moment_value(a, r - 1, p, q, src));
    return std::fabs(lhs - rhs);
}

/// Order-statistics form of the single-moment recurrence:
///   mu_{r:n+1}^(p+1) = -(2/(2-th)) (n+1)/(n-r+2) [ (p+1)/(n-r+1) mu_{r:n}^p - mu_{r:n}^(p+1) + mu_{r-1:n}^(p+1) ]
///                      + mu_{r-1:n+1}^(p+1)
/// Returns the right-hand side.
inline double os_moment_recurrence_rhs(int n, int r, const HlgParams& p, int order,
                                       MomentSource src = MomentSource::closed_form) {
    const GosScheme a = GosScheme::order_statistics(n);
    const GosScheme b = GosScheme::order_statistics(n + 1);
    const double th = p.theta();
    const int q = order + 1;
    return -2.0 / (2.0 - th) * (n + 1.0) / (n - r + 2.0) *
               (q / (n - r + 1.0) * detail::moment_value(a, r, p, order, src) -
                detail::moment_value(a, r, p, q, src) + detail::moment_value(a, r - 1, p, q, src)) +
           detail::moment_value(b, r - 1, p, q, src);
}

/// |t2 M_{r,s} - RHS| for the undifferentiated joint identity.
inline double joint_mgf_identity_residual(const SchemePair& pair, int r, int s, const HlgParams& p, double t1,
                                          double t2) {
    detail::require(r < s, "joint_mgf_identity_residual: need r < s");
    const auto& a = pair.base;
    const auto& b = pair.shifted;
    const double th = p.theta();
    const SeriesControl ctrl = derivative_series_control();
    auto mj = [&](const GosScheme& sch, int ss) {
        return ss == r ? marginal_mgf(sch, r, p, t1 + t2) : joint_mgf(sch, r, ss, p, t1, t2, ctrl);
    };
    const double c_star = std::exp(a.log_c(s) - b.log_c(s));
    const double lhs = t2 * mj(a, s);
    const double rhs = a.gamma(s) * (mj(a, s) - mj(a, s - 1)) -
                       (2.0 - th) / 2.0 * b.gamma(s) * c_star * (mj(b, s) - mj(b, s - 1));
    return std::fabs(lhs - rhs);
}

/// |M_{r,s}^{p,q}(t1,t2) - RHS| where the RHS uses (p, q+1) mixed derivatives.
inline double joint_recurrence_residual(const SchemePair& pair, int r, int s, const HlgParams& p, int po, int qo,
                                        double t1, double t2) {
    detail::require(r < s, "joint_recurrence_residual: need r < s");
    detail::require(po >= 0 && po <= 2 && qo >= 0 && qo <= 1, "joint_recurrence_residual: need p in 0..2, q in 0..1");
    const auto& a = pair.base;
    const auto& b = pair.shifted;
    const double th = p.theta();
    const int q1 = qo + 1;
    const double c_star = std::exp(a.log_c(s) - b.log_c(s));
    auto d = [&](const GosScheme& sch, int ss, int pp, int qq) {
        return joint_mgf_derivative(sch, r, ss, p, pp, qq, t1, t2);
    };
    const double lhs = d(a, s, po, qo);
    const double top = d(a, s, po, q1);
    const double rhs = a.gamma(s) / q1 * (top - d(a, s - 1, po, q1)) -
                       (2.0 - th) / 2.0 * b.gamma(s) * c_star / q1 * (d(b, s, po, q1) - d(b, s - 1, po, q1)) -
                       t2 / q1 * top;
    return std::fabs(lhs - rhs);
}

/// Joint moment-form recurrence (t1 = t2 = 0):
///   mu_{r,s}^{p,q} = g_s/(q+1) [mu_{r,s}^{p,q+1} - mu_{r,s-1}^{p,q+1}]
///                    - ((2-th)/2) (g_s+1) C*/(q+1) [mu'_{r,s}^{p,q+1} - mu'_{r,s-1}^{p,q+1}]
/// with mu_{r,r}^{p,q} = E[X(r)^(p+q)]. Moments from the closed form or quadrature.
inline double joint_moment_recurrence_residual(const SchemePair& pair, int r, int s, const HlgParams& p, int po,
                                               int qo, MomentSource src = MomentSource::closed_form) {
    detail::require(r < s, "joint_moment_recurrence_residual: need r < s");
    detail::require(po >= 0 && po <= 2 && qo >= 0 && qo <= 1, "joint_moment_recurrence_residual: need p in 0..2, q in 0..1");
    const auto& a = pair.base;
    const auto& b = pair.shifted;
    const double th = p.theta();
    const int q1 = qo + 1;
    const double c_star = std::exp(a.log_c(s) - b.log_c(s));
    auto mu = [&](const GosScheme& sch, int ss, int pp, int qq) {
        if (ss == r) return detail::moment_value(sch, r, p, pp + qq, src);
        if (src == MomentSource::closed_form) return joint_mgf_derivative(sch, r, ss, p, pp, qq, 0.0, 0.0);
        return joint_moment_quadrature(sch, r, ss, p, pp, qq);
    };
    const double lhs = mu(a, s, po, qo);
    const double rhs = a.gamma(s) / q1 * (mu(a, s, po, q1) - mu(a, s - 1, po, q1)) -
                       (2.0 - th) / 2.0 * b.gamma(s) * c_star / q1 * (mu(b, s, po, q1) - mu(b, s - 1, po, q1));
    return std::fabs(lhs - rhs);
}

} // namespace hlg
