#pragma once

// Generalized order statistics X(r, n, m, k) with equal m across positions,
// for an HLG baseline: scheme weights, marginal and pairwise densities, and
// a sampler built on the uniform gos product representation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "hlg/errors.hpp"
#include "hlg/hlg_dist.hpp"
#include "hlg/random.hpp"
#include "hlg/special_fn.hpp"

namespace hlg {

/// (n, m, k) with gamma_r = k + (n - r)(m + 1) > 0 for every rank r.
class GosScheme {
public:
    GosScheme(int n, double m, double k) : n_(n), m_(m), k_(k) {
        if (n < 1 || !(m >= -1.0) || !(k > 0.0) || !std::isfinite(m) || !std::isfinite(k)) {
            std::ostringstream os;
            os << "GosScheme: need n >= 1, m >= -1, k > 0 (n=" << n << ", m=" << m << ", k=" << k << ")";
            throw domain_error(os.str());
        }
    }

    /// Order statistics of a sample of size n.
    static GosScheme order_statistics(int n) { return {n, 0.0, 1.0}; }
    /// k-th upper record values (first n of them).
    static GosScheme k_records(int n, double k) { return {n, -1.0, k}; }

    int n() const noexcept { return n_; }
    double m() const noexcept { return m_; }
    double k() const noexcept { return k_; }
    bool is_record_scheme() const noexcept { return m_ == -1.0; }

    void check_rank(int r) const {
        if (r < 1 || r > n_) {
            std::ostringstream os;
            os << "GosScheme: rank " << r << " outside 1.." << n_;
            throw domain_error(os.str());
        }
    }

    double gamma(int r) const {
        check_rank(r);
        return k_ + (n_ - r) * (m_ + 1.0);
    }

    /// ln C_{r-1} = sum_{i<=r} ln gamma_i.
    double log_c(int r) const {
        check_rank(r);
        double acc = 0.0;
        for (int i = 1; i <= r; ++i) acc += std::log(gamma(i));
        return acc;
    }

    /// The scheme (n + 1, m, k - m) appearing in the recurrence relations.
    GosScheme shifted() const { return {n_ + 1, m_, k_ - m_}; }

    friend bool operator==(const GosScheme&, const GosScheme&) = default;

private:
    int n_;
    double m_;
    double k_;
};

inline double gamma_r(const GosScheme& s, int r) { return s.gamma(r); }

/// C_{r-1} = prod_{i=1}^{r} gamma_i.
inline double c_coeff(const GosScheme& s, int r) { return std::exp(s.log_c(r)); }

/// A scheme together with its (n + 1, m, k - m) companion.
struct SchemePair {
    GosScheme base;
    GosScheme shifted;

    explicit SchemePair(const GosScheme& b) : base(b), shifted(b.shifted()) {}

    /// C* = C_{r-1} / C_{r-1}^{(n+1, k-m)}.
    double c_star(int r) const { return std::exp(base.log_c(r) - shifted.log_c(r)); }
};

inline double h_m(double m, double x) {
    if (!(x >= 0.0 && x < 1.0)) {
        std::ostringstream os;
        os << "h_m: x must lie in [0, 1), got " << x;
        throw domain_error(os.str());
    }
    if (m == -1.0) return -std::log1p(-x);
    return -std::pow(1.0 - x, m + 1.0) / (m + 1.0);
}

inline double g_m(double m, double x) { return h_m(m, x) - h_m(m, 0.0); }

namespace detail {

// g_m(F) written through ln Fbar so that small F keeps full precision.
inline double g_m_from_log_sf(double m, double log_sf) {
    if (m == -1.0) return -log_sf;
    return -std::expm1((m + 1.0) * log_sf) / (m + 1.0);
}

// h_m(F(y)) - h_m(F(x)) for x <= y, via survival logs.
inline double h_m_increment(double m, double log_sf_x, double log_sf_y) {
    if (m == -1.0) return log_sf_x - log_sf_y;
    const double mp1 = m + 1.0;
    return std::exp(mp1 * log_sf_x) * (-std::expm1(mp1 * (log_sf_y - log_sf_x))) / mp1;
}

inline double ln_factorial(int j) { return ln_gamma(j + 1.0); }

} // namespace detail

/// Density of X(r, n, m, k): C_{r-1}/(r-1)! Fbar^(gamma_r - 1) f g_m^(r-1)(F).
inline double marginal_pdf(const GosScheme& s, int r, const HlgParams& p, double x) {
    s.check_rank(r);
    detail::require_support(x, "marginal_pdf");
    const double lsf = log_sf(p, x);
    const double f = pdf(p, x);
    if (f == 0.0) return 0.0;
    double log_val = s.log_c(r) - detail::ln_factorial(r - 1) + (s.gamma(r) - 1.0) * lsf + std::log(f);
    if (r > 1) {
        const double g = detail::g_m_from_log_sf(s.m(), lsf);
        if (g <= 0.0) return 0.0;
        log_val += (r - 1) * std::log(g);
    }
    return std::exp(log_val);
}

/// Joint density of (X(r), X(s)), r < s; zero outside x <= y.
inline double joint_pdf(const GosScheme& sch, int r, int sdx, const HlgParams& p, double x, double y) {
    sch.check_rank(r);
    sch.check_rank(sdx);
    if (!(r < sdx)) {
        std::ostringstream os;
        os << "joint_pdf: need r < s, got r=" << r << ", s=" << sdx;
        throw domain_error(os.str());
    }
    detail::require_support(x, "joint_pdf");
    detail::require_support(y, "joint_pdf");
    if (x > y) return 0.0;
    const double m = sch.m();
    const double lsx = log_sf(p, x);
    const double lsy = log_sf(p, y);
    const double fx = pdf(p, x);
    const double fy = pdf(p, y);
    if (fx == 0.0 || fy == 0.0) return 0.0;

    double log_val = sch.log_c(sdx) - detail::ln_factorial(r - 1) - detail::ln_factorial(sdx - r - 1) +
                     m * lsx + std::log(fx) + (sch.gamma(sdx) - 1.0) * lsy + std::log(fy);
    if (r > 1) {
        const double g = detail::g_m_from_log_sf(m, lsx);
        if (g <= 0.0) return 0.0;
        log_val += (r - 1) * std::log(g);
    }
    if (sdx - r - 1 > 0) {
        const double dh = detail::h_m_increment(m, lsx, lsy);
        if (dh <= 0.0) return 0.0;
        log_val += (sdx - r - 1) * std::log(dh);
    }
    return std::exp(log_val);
}

/// Inverse of the survival function: x with ln Fbar(x) = log_s.
inline double quantile_from_log_sf(const HlgParams& p, double log_s) {
    detail::require(log_s <= 0.0, "quantile_from_log_sf: log survival must be <= 0");
    const double th = p.theta();
    const double s = std::exp(log_s);
    // e^-x = s theta / (2 - (2 - theta) s)
    return -(log_s + std::log(th)) + std::log(2.0 - (2.0 - th) * s);
}

/// One draw of (X(1), ..., X(n)); nondecreasing by construction.
/// Uses Fbar(X(r)) = prod_{j<=r} U_j^(1/gamma_j) with iid uniforms U_j.
inline std::vector<double> sample_gos(const GosScheme& s, const HlgParams& p, std::uint64_t seed) {
    Engine eng(seed);
    std::vector<double> out(static_cast<std::size_t>(s.n()));
    double log_s = 0.0;
    double prev = 0.0;
    for (int r = 1; r <= s.n(); ++r) {
        log_s += std::log(uniform_open(eng)) / s.gamma(r);
        const double x = std::max(prev, std::max(0.0, quantile_from_log_sf(p, log_s)));
        out[static_cast<std::size_t>(r - 1)] = x;
        prev = x;
    }
    return out;
}

} // namespace hlg
