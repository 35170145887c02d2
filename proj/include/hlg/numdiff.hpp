#pragma once

// Central finite-difference derivatives with one Richardson step (h, h/2),
// used to turn moment generating functions into moments.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "hlg/errors.hpp"

namespace hlg::numdiff {

namespace detail {

// Second-order accurate central stencils on offsets -2..2 (times h).
inline const std::array<double, 5>& stencil(int order) {
    static const std::array<std::array<double, 5>, 5> w{{
        {0.0, 0.0, 1.0, 0.0, 0.0},
        {0.0, -0.5, 0.0, 0.5, 0.0},
        {0.0, 1.0, -2.0, 1.0, 0.0},
        {-0.5, 1.0, 0.0, -1.0, 0.5},
        {1.0, -4.0, 6.0, -4.0, 1.0},
    }};
    if (order < 0 || order > 4) {
        std::ostringstream os;
        os << "numdiff: derivative order " << order << " outside 0..4";
        throw domain_error(os.str());
    }
    return w[static_cast<std::size_t>(order)];
}

template <class F>
double central(F& f, double t0, int order, double h) {
    const auto& w = stencil(order);
    double acc = 0.0;
    for (int i = -2; i <= 2; ++i) {
        const double wi = w[static_cast<std::size_t>(i + 2)];
        if (wi != 0.0) acc += wi * f(t0 + i * h);
    }
    return acc / std::pow(h, order);
}

template <class F>
double central_mixed(F& f, double t1, double t2, int p, int q, double h) {
    const auto& wp = stencil(p);
    const auto& wq = stencil(q);
    double acc = 0.0;
    for (int i = -2; i <= 2; ++i) {
        const double wi = wp[static_cast<std::size_t>(i + 2)];
        if (wi == 0.0) continue;
        for (int j = -2; j <= 2; ++j) {
            const double wj = wq[static_cast<std::size_t>(j + 2)];
            if (wj == 0.0) continue;
            acc += wi * wj * f(t1 + i * h, t2 + j * h);
        }
    }
    return acc / std::pow(h, p + q);
}

} // namespace detail

/// Default base step for a derivative of the given total order at point t.
inline double default_step(int total_order, double t = 0.0) {
    const double base = total_order <= 2 ? 1e-3 : 1e-2;
    return base * std::max(1.0, std::fabs(t));
}

/// order-th derivative of f at t0; Richardson-combined central differences.
template <class F>
double derivative(F&& f, double t0, int order, double h) {
    if (order == 0) return f(t0);
    if (!(h > 0.0)) throw numeric_error("numdiff: step must be positive");
    const double coarse = detail::central(f, t0, order, h);
    const double fine = detail::central(f, t0, order, 0.5 * h);
    const double v = (4.0 * fine - coarse) / 3.0;
    if (!std::isfinite(v)) throw numeric_error("numdiff: non-finite derivative estimate");
    return v;
}

template <class F>
double derivative(F&& f, double t0, int order) {
    return derivative(f, t0, order, default_step(order, t0));
}

/// Mixed partial d^(p+q) f / dt1^p dt2^q at (t1, t2).
template <class F>
double mixed_derivative(F&& f, double t1, double t2, int p, int q, double h) {
    if (p == 0 && q == 0) return f(t1, t2);
    if (!(h > 0.0)) throw numeric_error("numdiff: step must be positive");
    const double coarse = detail::central_mixed(f, t1, t2, p, q, h);
    const double fine = detail::central_mixed(f, t1, t2, p, q, 0.5 * h);
    const double v = (4.0 * fine - coarse) / 3.0;
    if (!std::isfinite(v)) throw numeric_error("numdiff: non-finite mixed derivative estimate");
    return v;
}

template <class F>
double mixed_derivative(F&& f, double t1, double t2, int p, int q) {
    return mixed_derivative(f, t1, t2, p, q,
                            default_step(p + q, std::max(std::fabs(t1), std::fabs(t2))));
}

} // namespace hlg::numdiff
