#pragma once

// Goodness of fit for HLG: builtin datasets, CSV loading, the one-sample
// Kolmogorov-Smirnov statistic with asymptotic and exact p-values, and the
// MLE + KS fit report.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hlg/bayes.hpp"
#include "hlg/errors.hpp"
#include "hlg/hlg_dist.hpp"

namespace hlg {

enum class DataSource { builtin, file };

struct Dataset {
    std::string name;
    std::vector<double> values;
    DataSource source = DataSource::file;

    void validate() const {
        if (values.empty()) throw domain_error("Dataset '" + name + "': no values");
        for (double v : values)
            if (!(v > 0.0) || !std::isfinite(v)) {
                std::ostringstream os;
                os << "Dataset '" << name << "': values must be positive and finite, got " << v;
                throw domain_error(os.str());
            }
    }
};

/// Mortality rates of the Netherlands (30 values).
inline Dataset mortality_nl() {
    return {"mortality_nl",
            {14.918, 10.656, 12.274, 10.289, 10.832, 7.099, 5.928, 13.211, 7.968, 7.584,
             5.555,  6.027,  4.097,  3.611,  4.960,  7.498, 6.940, 5.307,  5.048, 2.857,
             2.254,  5.431,  4.462,  3.883,  3.461,  3.647, 1.974, 1.273,  1.416, 4.235},
            DataSource::builtin};
}

/// Ages of locomotive traction motors at failure (40 values).
inline Dataset traction_age() {
    return {"traction_age",
            {1.66, 3.35, 1.28, 0.01, 0.41, 4.98, 0.22, 0.02, 1.9,  1.7,  0.35, 1.64, 0.31, 0.27,
             0.59, 5.71, 2.61, 2.09, 0.27, 1.4,  2.49, 1.45, 0.65, 2.95, 0.75, 4.99, 0.32, 0.29,
             2.21, 1.4,  2.23, 3.4,  3.97, 1.66, 9.52, 1.6,  0.48, 12,   3.16, 8.27},
            DataSource::builtin};
}

inline std::vector<std::string> builtin_dataset_names() { return {"mortality_nl", "traction_age"}; }

inline Dataset builtin_dataset(const std::string& name) {
    if (name == "mortality_nl") return mortality_nl();
    if (name == "traction_age") return traction_age();
    throw domain_error("unknown builtin dataset '" + name + "' (expected mortality_nl or traction_age)");
}

/// FNV-1a over the shortest round-trip decimal forms, comma separated.
inline std::uint64_t dataset_fingerprint(const Dataset& d) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    };
    char buf[64];
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        if (i) mix(',');
        const auto res = std::to_chars(buf, buf + sizeof buf, d.values[i]);
        for (const char* p = buf; p != res.ptr; ++p) mix(*p);
    }
    return h;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

} // namespace detail

/// Parses a single-column CSV stream with an optional header line.
inline std::vector<double> parse_csv_column(std::istream& in, const std::string& label) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto cell = detail::trim(line);
        if (cell.empty() || cell.front() == '#') continue;
        if (const auto comma = cell.find(','); comma != std::string_view::npos) cell = detail::trim(cell.substr(0, comma));
        double v = 0.0;
        if (!detail::parse_double(cell, v)) {
            if (!seen_content) {
                seen_content = true; // header
                continue;
            }
            std::ostringstream os;
            os << label << ": line " << lineno << ": cannot parse '" << cell << "' as a number";
            throw io_error(os.str());
        }
        seen_content = true;
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << label << ": line " << lineno << ": value " << v << " is not positive";
            throw io_error(os.str());
        }
        values.push_back(v);
    }
    if (values.empty()) throw io_error(label + ": no numeric values found");
    return values;
}

/// `builtin:<name>`, a bare builtin name, or a CSV path.
inline Dataset load_dataset(const std::string& spec) {
    constexpr std::string_view prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) return builtin_dataset(spec.substr(prefix.size()));
    std::ifstream in(spec);
    if (!in) {
        for (const auto& n : builtin_dataset_names())
            if (n == spec) return builtin_dataset(spec);
        throw io_error("cannot open dataset file '" + spec + "'");
    }
    Dataset d{spec, parse_csv_column(in, spec), DataSource::file};
    d.validate();
    return d;
}

struct KsResult {
    double distance = 0.0;
    double p_value = 1.0;
};

/// P(K > t) for the Kolmogorov limit law, 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 t^2) (100 terms).
inline double kolmogorov_sf(double t) {
    if (!(t > 0.0)) return 1.0;
    if (t < 0.2) {
        // small-t theta-function form of the cdf; it underflows to 0 here
        const double pi2 = M_PI * M_PI;
        double cdf = 0.0;
        for (int j = 1; j <= 100; ++j) cdf += std::exp(-(2 * j - 1) * (2 * j - 1) * pi2 / (8.0 * t * t));
        cdf *= std::sqrt(2.0 * M_PI) / t;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double acc = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * t * t);
        acc += (j % 2 == 1) ? term : -term;
    }
    return std::clamp(2.0 * acc, 0.0, 1.0);
}

/// Exact P(D_n >= d) for a continuous null (Marsaglia, Tsang & Wang 2003).
inline double ks_exact_sf(int n, double d) {
    detail::require(n >= 1, "ks_exact_sf: n must be >= 1");
    if (d <= 0.0) return 1.0;
    if (d >= 1.0) return 0.0;
    const int k = static_cast<int>(n * d) + 1;
    const int m = 2 * k - 1;
    const double h = k - n * d;
    const auto idx = [m](int i, int j) { return static_cast<std::size_t>(i) * m + j; };
    std::vector<double> H(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) H[idx(i, j)] = (i - j + 1 >= 0) ? 1.0 : 0.0;
    for (int i = 0; i < m; ++i) {
        H[idx(i, 0)] -= std::pow(h, i + 1);
        H[idx(m - 1, i)] -= std::pow(h, m - i);
    }
    H[idx(m - 1, 0)] += (2.0 * h - 1.0 > 0.0) ? std::pow(2.0 * h - 1.0, m) : 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i - j + 1 > 0)
                for (int g = 1; g <= i - j + 1; ++g) H[idx(i, j)] /= g;

    auto mul = [&](const std::vector<double>& A, const std::vector<double>& B) {
        std::vector<double> C(A.size(), 0.0);
        for (int i = 0; i < m; ++i)
            for (int l = 0; l < m; ++l) {
                const double a = A[idx(i, l)];
                if (a == 0.0) continue;
                for (int j = 0; j < m; ++j) C[idx(i, j)] += a * B[idx(l, j)];
            }
        return C;
    };
    // H^n with a running power-of-two exponent to dodge overflow
    std::vector<double> result(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) result[idx(i, i)] = 1.0;
    int e_result = 0;
    std::vector<double> base = H;
    int e_base = 0;
    for (int p = n; p > 0; p >>= 1) {
        if (p & 1) {
            result = mul(result, base);
            e_result += e_base;
            const double c = result[idx(k - 1, k - 1)];
            if (c > 1e140 || (c != 0.0 && c < 1e-140)) {
                const int shift = static_cast<int>(std::floor(std::log2(std::fabs(c))));
                for (auto& v : result) v = std::ldexp(v, -shift);
                e_result += shift;
            }
        }
        if (p > 1) {
            base = mul(base, base);
            e_base *= 2;
            const double c = std::fabs(base[idx(k - 1, k - 1)]);
            if (c > 1e140 || (c != 0.0 && c < 1e-140)) {
                const int shift = static_cast<int>(std::floor(std::log2(c)));
                for (auto& v : base) v = std::ldexp(v, -shift);
                e_base += shift;
            }
        }
    }
    // P(D_n < d) = n!/n^n * (H^n)_{kk}
    double log_cdf = std::log(result[idx(k - 1, k - 1)]) + e_result * std::log(2.0);
    log_cdf += std::lgamma(n + 1.0) - n * std::log(static_cast<double>(n));
    return std::clamp(1.0 - std::exp(log_cdf), 0.0, 1.0);
}

/// D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n) for any continuous cdf F.
template <class Cdf>
double ks_distance(std::vector<double> data, Cdf&& F) {
    detail::require(!data.empty(), "ks_distance: empty data");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = F(data[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

/// KS distance against HLG(theta) with the asymptotic p-value.
inline KsResult ks_statistic(std::vector<double> data, const HlgParams& p) {
    const double n = static_cast<double>(data.size());
    const double d = ks_distance(std::move(data), [&](double x) { return cdf(p, x); });
    return {d, kolmogorov_sf(std::sqrt(n) * d)};
}

inline KsResult ks_statistic(const Dataset& data, const HlgParams& p) { return ks_statistic(data.values, p); }

struct FitReport {
    std::string dataset;
    double theta_hat = 0.0;
    double ks_distance = 0.0;
    double p_value = 1.0;       // asymptotic Kolmogorov
    double p_value_exact = 1.0; // exact finite-n, same fully specified null
    int n = 0;
};

/// MLE under the order-statistics scheme, then KS at the estimate.
inline FitReport fit_report(const Dataset& data) {
    data.validate();
    const double th = mle(GosSample::order_statistics(data.values));
    const auto ks = ks_statistic(data, HlgParams(th));
    FitReport r;
    r.dataset = data.name;
    r.theta_hat = th;
    r.ks_distance = ks.distance;
    r.p_value = ks.p_value;
    r.n = static_cast<int>(data.values.size());
    r.p_value_exact = ks_exact_sf(r.n, ks.distance);
    return r;
}

inline nlohmann::json to_json(const FitReport& r) {
    return {{"dataset", r.dataset},
            {"theta_hat", r.theta_hat},
            {"ks_distance", r.ks_distance},
            {"p_value", r.p_value},
            {"p_value_exact", r.p_value_exact},
            {"p_value_method", "asymptotic Kolmogorov; theta estimated from the same data, so approximate"},
            {"n", r.n}};
}

struct EcdfRow {
    double x;
    double ecdf;
    double fitted_cdf;
};

/// Sorted data with the empirical and fitted cdf at each point.
inline std::vector<EcdfRow> ecdf_overlay(std::vector<double> data, const HlgParams& p) {
    std::sort(data.begin(), data.end());
    std::vector<EcdfRow> rows;
    const double n = static_cast<double>(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) rows.push_back({data[i], (i + 1) / n, cdf(p, data[i])});
    return rows;
}

inline void write_ecdf_csv(const std::string& path, const std::vector<EcdfRow>& rows) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out.precision(17);
    out << "x,ecdf,fitted_cdf\n";
    for (const auto& r : rows) out << r.x << ',' << r.ecdf << ',' << r.fitted_cdf << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

} // namespace hlg
