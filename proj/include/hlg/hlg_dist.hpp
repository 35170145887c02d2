#pragma once

// Half-logistic-geometric law HLG(theta), 0 < theta < 1:
//   F(x) = theta (1 - e^-x) / (theta + (2 - theta) e^-x),   x >= 0
//   f(x) = 2 theta e^-x / (theta + (2 - theta) e^-x)^2
// and the survival identity f = Fbar - ((2 - theta) / 2) Fbar^2.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "hlg/errors.hpp"
#include "hlg/random.hpp"

namespace hlg {

class HlgParams {
public:
    explicit HlgParams(double theta) : theta_(theta) {
        if (!(theta > 0.0 && theta < 1.0)) {
            std::ostringstream os;
            os << "HlgParams: theta must lie in (0, 1), got " << theta;
            throw domain_error(os.str());
        }
    }

    double theta() const noexcept { return theta_; }

    /// Upper limit 1 - theta/2 of the beta integrals.
    double z_max() const noexcept { return 1.0 - 0.5 * theta_; }

    friend bool operator==(const HlgParams&, const HlgParams&) = default;

private:
    double theta_;
};

namespace detail {

inline void require_support(double x, const char* op) {
    if (!(x >= 0.0)) {
        std::ostringstream os;
        os << op << ": x must be >= 0, got " << x;
        throw domain_error(os.str());
    }
}

} // namespace detail

/// ln Fbar(x) = ln 2 - x - ln(theta + (2 - theta) e^-x); stable for any x >= 0.
inline double log_sf(const HlgParams& p, double x) {
    detail::require_support(x, "log_sf");
    const double th = p.theta();
    if (x > 700.0) return std::log(2.0 / th) - x - std::log1p((2.0 - th) / th * std::exp(-x));
    return std::log(2.0) - x - std::log(th + (2.0 - th) * std::exp(-x));
}

inline double sf(const HlgParams& p, double x) {
    detail::require_support(x, "sf");
    if (x > 700.0) return std::exp(log_sf(p, x));
    const double e = std::exp(-x);
    return 2.0 * e / (p.theta() + (2.0 - p.theta()) * e);
}

inline double cdf(const HlgParams& p, double x) {
    detail::require_support(x, "cdf");
    const double th = p.theta();
    const double e = std::exp(-x);
    return th * (-std::expm1(-x)) / (th + (2.0 - th) * e);
}

inline double pdf(const HlgParams& p, double x) {
    detail::require_support(x, "pdf");
    const double th = p.theta();
    if (x > 700.0) return th / 2.0 * std::exp(2.0 * log_sf(p, x) + x);
    const double e = std::exp(-x);
    const double d = th + (2.0 - th) * e;
    return 2.0 * th * e / (d * d);
}

inline double quantile(const HlgParams& p, double u) {
    if (!(u >= 0.0 && u < 1.0)) {
        std::ostringstream os;
        os << "quantile: u must lie in [0, 1), got " << u;
        throw domain_error(os.str());
    }
    const double th = p.theta();
    return std::log(th + (2.0 - th) * u) - std::log(th) - std::log1p(-u);
}

/// x_hi with Fbar(x_hi) < tail; bounded domain for the quadrature oracles.
inline double upper_support(const HlgParams& p, double tail = 1e-16) {
    return std::log(2.0 / p.theta()) - std::log(tail) + 1.0;
}

/// n iid draws by inversion; deterministic given seed.
inline std::vector<double> sample(const HlgParams& p, std::size_t n, std::uint64_t seed) {
    detail::require(n >= 1, "sample: n must be >= 1");
    Engine eng(seed);
    std::vector<double> out(n);
    for (auto& v : out) {
        double u = uniform_open(eng);
        v = quantile(p, u);
    }
    return out;
}

} // namespace hlg
