#pragma once

// Adaptive quadrature used by the oracle paths. Backed by Boost.Math
// Gauss-Kronrod (smooth integrands) and tanh-sinh (endpoint singularities).

#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hlg/errors.hpp"

namespace hlg::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod on [a, b].
template <class F>
Result gauss_kronrod(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 30) {
    if (a == b) return {};
    double err = 0.0;
    double l1 = 0.0;
    double v = 0.0;
    try {
        v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err, &l1);
    } catch (const std::exception& e) {
        throw numeric_error(std::string("quadrature: ") + e.what());
    }
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "quadrature: non-finite result on [" << a << ", " << b << "]";
        throw numeric_error(os.str());
    }
    return {v, err};
}

/// Gauss-Kronrod over consecutive sub-intervals given by sorted breakpoints.
template <class F>
Result gauss_kronrod_pieces(F&& f, const std::vector<double>& breaks, double rel_tol = 1e-12) {
    Result total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const Result r = gauss_kronrod(f, breaks[i], breaks[i + 1], rel_tol);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

/// tanh-sinh on [a, b]; tolerates integrable singularities at either end.
template <class F>
Result tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-12) {
    if (a == b) return {};
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    double v = 0.0;
    try {
        v = integrator.integrate(f, a, b, rel_tol, &err, &l1, &levels);
    } catch (const std::exception& e) {
        throw numeric_error(std::string("quadrature: ") + e.what());
    }
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "quadrature: non-finite tanh-sinh result on [" << a << ", " << b << "]";
        throw numeric_error(os.str());
    }
    return {v, err};
}

} // namespace hlg::quad
