#pragma once

// Special functions used by the closed-form moment expressions: log-gamma,
// the non-regularized incomplete beta B(x; a, b) = int_0^x u^(a-1) (1-u)^(b-1) du,
// Pochhammer symbols and the Gauss hypergeometric series.

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <type_traits>

#include "hlg/errors.hpp"

namespace hlg {

/// Truncation control for infinite series.
struct SeriesControl {
    double rel_tol = 1e-12;
    std::size_t max_terms = 100000;

    void validate() const {
        detail::require(rel_tol > 0.0, "SeriesControl: rel_tol must be positive");
        detail::require(max_terms >= 1, "SeriesControl: max_terms must be >= 1");
    }
};

/// ln Gamma(x) for x > 0, in double or long double precision.
template <class T>
T ln_gamma(T x) {
    if (!(x > T(0))) {
        std::ostringstream os;
        os << "ln_gamma: argument must be positive, got " << x;
        throw domain_error(os.str());
    }
#if defined(__GLIBC__)
    int sign = 0;
    if constexpr (std::is_same_v<T, long double>) {
        return ::lgammal_r(x, &sign);
    } else {
        return ::lgamma_r(x, &sign);
    }
#else
    return std::lgamma(x);
#endif
}

inline double ln_gamma(double x) { return ln_gamma<double>(x); }

/// ln B(a, b) for a, b > 0.
template <class T>
T ln_beta(T a, T b) {
    return ln_gamma<T>(a) + ln_gamma<T>(b) - ln_gamma<T>(a + b);
}

inline double ln_beta(double a, double b) { return ln_beta<double>(a, b); }

namespace detail {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
// Converges rapidly for x < (a + 1) / (a + b + 2).
template <class T>
T beta_cf(T x, T a, T b) {
    constexpr int max_iter = 20000;
    const T eps = std::numeric_limits<T>::epsilon();
    const T tiny = T(1e-300);

    const T qab = a + b;
    const T qap = a + T(1);
    const T qam = a - T(1);
    T c = 1;
    T d = T(1) - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = T(1) / d;
    T h = d;
    T del = 0;
    for (int m = 1; m <= max_iter; ++m) {
        const T m2 = T(2 * m);
        T aa = T(m) * (b - T(m)) * x / ((qam + m2) * (a + m2));
        d = T(1) + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = T(1) + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = T(1) / d;
        h *= d * c;
        aa = -(a + T(m)) * (qab + T(m)) * x / ((a + m2) * (qap + m2));
        d = T(1) + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = T(1) + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = T(1) / d;
        del = d * c;
        h *= del;
        if (std::fabs(del - T(1)) <= eps) return h;
    }
    std::ostringstream os;
    os << "inc_beta: continued fraction did not converge (x=" << x << ", a=" << a << ", b=" << b
       << ", iterations=" << max_iter << ", last |delta-1|=" << std::fabs(del - T(1)) << ")";
    throw numeric_error(os.str());
}

// x^a (1-x)^b / a * CF(x; a, b): the lower tail, unregularized.
template <class T>
T inc_beta_lower(T x, T a, T b) {
    const T log_front = a * std::log(x) + b * std::log1p(-x) - std::log(a);
    return std::exp(log_front) * beta_cf<T>(x, a, b);
}

} // namespace detail

/// Non-regularized incomplete beta B(x; a, b) = int_0^x u^(a-1) (1-u)^(b-1) du.
template <class T>
T inc_beta(T x, T a, T b) {
    if (!(x >= T(0) && x <= T(1)) || !(a > T(0)) || !(b > T(0))) {
        std::ostringstream os;
        os << "inc_beta: need 0 <= x <= 1, a > 0, b > 0 (x=" << x << ", a=" << a << ", b=" << b << ")";
        throw domain_error(os.str());
    }
    if (x == T(0)) return T(0);
    const T complete = std::exp(ln_beta<T>(a, b));
    if (x == T(1)) return complete;
    if (x < (a + T(1)) / (a + b + T(2))) return detail::inc_beta_lower<T>(x, a, b);
    return complete - detail::inc_beta_lower<T>(T(1) - x, b, a);
}

inline double inc_beta(double x, double a, double b) { return inc_beta<double>(x, a, b); }

/// Rising factorial (a)_j = a (a+1) ... (a+j-1), (a)_0 = 1.
inline double pochhammer(double a, unsigned j) {
    double prod = 1.0;
    unsigned i = 0;
    for (; i < j; ++i) {
        prod *= a + i;
        if (prod == 0.0) return 0.0;
        if (std::fabs(prod) > 1e290) break;
    }
    if (i == j) return prod;

    // Continue in log space once the product threatens to overflow.
    double log_mag = std::log(std::fabs(prod));
    bool negative = prod < 0.0;
    for (++i; i < j; ++i) {
        const double f = a + i;
        if (f == 0.0) return 0.0;
        log_mag += std::log(std::fabs(f));
        if (f < 0.0) negative = !negative;
    }
    const double mag = std::exp(log_mag);
    return negative ? -mag : mag;
}

/// Gauss hypergeometric series 2F1(a, b; c; x) for |x| < 1.
inline double gauss_2f1(double a, double b, double c, double x, const SeriesControl& ctrl = {}) {
    ctrl.validate();
    if (!(std::fabs(x) < 1.0)) {
        std::ostringstream os;
        os << "gauss_2f1: series requires |x| < 1, got x=" << x;
        throw domain_error(os.str());
    }
    if (c <= 0.0 && c == std::floor(c)) {
        std::ostringstream os;
        os << "gauss_2f1: c must not be a non-positive integer, got c=" << c;
        throw domain_error(os.str());
    }
    double term = 1.0;
    double sum = 1.0;
    for (std::size_t z = 0; z < ctrl.max_terms; ++z) {
        const double zz = static_cast<double>(z);
        term *= (a + zz) * (b + zz) / ((c + zz) * (zz + 1.0)) * x;
        sum += term;
        if (std::fabs(term) <= ctrl.rel_tol * std::fabs(sum)) return sum;
    }
    std::ostringstream os;
    os << "gauss_2f1: no convergence within " << ctrl.max_terms << " terms (a=" << a << ", b=" << b
       << ", c=" << c << ", x=" << x << ", partial sum=" << sum << ")";
    throw numeric_error(os.str());
}

} // namespace hlg
