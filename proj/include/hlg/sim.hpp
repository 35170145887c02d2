#pragma once

// Replication engine for the order-statistics simulation study: repeated gos
// samples, Lindley and MCMC Bayes estimates per loss, summarized as AE/AB/MSE.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hlg/bayes.hpp"
#include "hlg/errors.hpp"
#include "hlg/gos.hpp"
#include "hlg/random.hpp"

namespace hlg {

enum class Method { lindley, mcmc };

inline std::string to_string(Method m) { return m == Method::lindley ? "lindley" : "mcmc"; }

struct SimConfig {
    double theta_true = 0.3;
    GosScheme scheme = GosScheme::order_statistics(10);
    Prior prior{};
    std::vector<LossSpec> losses{LossSpec::sel()};
    std::vector<Method> methods{Method::lindley, Method::mcmc};
    std::size_t replications = 1000;
    McmcConfig mcmc{10000, 2000, 0.05, 0, 0.5};
    std::uint64_t master_seed = 1;
    double failure_cap = 0.01; // fraction of R
    unsigned threads = 0;      // 0 = hardware concurrency
    LikelihoodMode mode = LikelihoodMode::corrected;

    int n() const noexcept { return scheme.n(); }

    void validate() const {
        if (!(theta_true > 0.0 && theta_true < 1.0)) {
            std::ostringstream os;
            os << "SimConfig: theta_true must lie in (0, 1), got " << theta_true;
            throw domain_error(os.str());
        }
        detail::require(replications >= 1, "SimConfig: replications must be >= 1");
        detail::require(!losses.empty() && !methods.empty(), "SimConfig: need at least one loss and one method");
        detail::require(failure_cap >= 0.0 && failure_cap < 1.0, "SimConfig: failure_cap must lie in [0, 1)");
        prior.validate();
        for (const auto& l : losses) l.validate();
        mcmc.validate();
    }
};

/// AE, AB, MSE of one estimator over the replications.
struct SimCell {
    Method method = Method::lindley;
    LossSpec loss{};
    double ae = 0.0;
    double ab = 0.0;
    double mse = 0.0;
    double mse_se = 0.0; // standard error of the MSE estimate

    std::string label() const {
        std::ostringstream os;
        os << to_string(method) << '/' << to_string(loss.family);
        if (loss.family != LossFamily::sel) os << "(c=" << loss.c << ')';
        return os.str();
    }
};

struct CellResult {
    std::vector<SimCell> cells;
    std::size_t replications = 0;
    std::size_t failures = 0;   // failed attempts that were resampled
    bool aborted = false;
    std::string abort_reason;

    std::string status() const { return aborted ? "aborted" : "ok"; }
};

namespace detail {

// Estimates for every (method, loss) pair from one sample, method-major.
inline std::vector<double> replicate_once(const SimConfig& cfg, const GosSample& s, std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(cfg.methods.size() * cfg.losses.size());
    for (Method m : cfg.methods) {
        if (m == Method::lindley) {
            for (const auto& l : cfg.losses) out.push_back(lindley_estimate(s, cfg.prior, l, cfg.mode));
        } else {
            auto mc = default_mcmc_config(s, cfg.prior, seed, cfg.mode);
            mc.chain_length = cfg.mcmc.chain_length;
            mc.burn_in = cfg.mcmc.burn_in;
            const auto chain = mh_chain(s, cfg.prior, mc, cfg.mode);
            for (const auto& l : cfg.losses) out.push_back(mcmc_estimate(chain.post_burn_in(), l));
        }
    }
    for (double v : out)
        if (!std::isfinite(v)) throw numeric_error("replication produced a non-finite estimate");
    return out;
}

} // namespace detail

inline constexpr std::uint64_t max_attempts_per_replication = 100;

/// Runs every replication of one configuration; replication i uses seeds derived
/// from (master_seed, i, attempt), so results do not depend on the thread count.
inline CellResult run_cell(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t R = cfg.replications;
    const auto cap = static_cast<std::size_t>(std::floor(cfg.failure_cap * static_cast<double>(R)));
    const HlgParams truth(cfg.theta_true);

    std::vector<std::vector<double>> est(R);
    std::vector<std::size_t> fails(R, 0);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < R;) {
            const std::uint64_t rep_seed = derive_seed(cfg.master_seed, i);
            for (std::uint64_t attempt = 0; attempt < max_attempts_per_replication; ++attempt) {
                const std::uint64_t seed = derive_seed(rep_seed, attempt);
                try {
                    const GosSample s(cfg.scheme, sample_gos(cfg.scheme, truth, derive_seed(seed, 0)));
                    est[i] = detail::replicate_once(cfg, s, derive_seed(seed, 1));
                    break;
                } catch (const numeric_error&) {
                    ++fails[i];
                }
            }
        }
    };

    unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, R));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
        worker();
    }

    CellResult res;
    res.replications = R;
    for (std::size_t f : fails) res.failures += f;
    const bool exhausted = std::any_of(est.begin(), est.end(), [](const auto& v) { return v.empty(); });
    if (res.failures > cap || exhausted) {
        res.aborted = true;
        std::ostringstream os;
        os << res.failures << " failed replications";
        if (exhausted) os << " (some replication failed " << max_attempts_per_replication << " times in a row)";
        os << " against a cap of " << cap << " (" << cfg.failure_cap * 100.0 << "% of R=" << R << ")";
        res.abort_reason = os.str();
    }

    std::size_t col = 0;
    for (Method m : cfg.methods)
        for (const auto& l : cfg.losses) {
            SimCell c;
            c.method = m;
            c.loss = l;
            if (res.aborted) {
                c.ae = c.ab = c.mse = c.mse_se = std::numeric_limits<double>::quiet_NaN();
            } else {
                double sum = 0.0, sq = 0.0, q4 = 0.0;
                for (std::size_t i = 0; i < R; ++i) {
                    const double e = est[i][col];
                    const double d2 = (e - cfg.theta_true) * (e - cfg.theta_true);
                    sum += e;
                    sq += d2;
                    q4 += d2 * d2;
                }
                const double Rd = static_cast<double>(R);
                c.ae = sum / Rd;
                c.ab = c.ae - cfg.theta_true;
                c.mse = sq / Rd;
                c.mse_se = R > 1 ? std::sqrt(std::max(0.0, q4 / Rd - c.mse * c.mse) / (Rd - 1.0)) : 0.0;
            }
            res.cells.push_back(c);
            ++col;
        }
    return res;
}

// ---- JSON round trip for SimConfig ----

inline nlohmann::json to_json(const SimConfig& c) {
    nlohmann::json losses = nlohmann::json::array();
    for (const auto& l : c.losses) losses.push_back({{"family", to_string(l.family)}, {"c", l.c}});
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : c.methods) methods.push_back(to_string(m));
    return {{"theta_true", c.theta_true},
            {"scheme", {{"n", c.scheme.n()}, {"m", c.scheme.m()}, {"k", c.scheme.k()}}},
            {"prior", {{"a", c.prior.a}, {"b", c.prior.b}}},
            {"losses", losses},
            {"methods", methods},
            {"replications", c.replications},
            {"mcmc", {{"chain_length", c.mcmc.chain_length}, {"burn_in", c.mcmc.burn_in}}},
            {"master_seed", c.master_seed},
            {"failure_cap", c.failure_cap},
            {"likelihood", to_string(c.mode)}};
}

/// Missing keys keep their defaults.
inline SimConfig sim_config_from_json(const nlohmann::json& j) {
    SimConfig c;
    try {
        c.theta_true = j.value("theta_true", c.theta_true);
        if (j.contains("scheme")) {
            const auto& s = j["scheme"];
            c.scheme = GosScheme(s.value("n", 10), s.value("m", 0.0), s.value("k", 1.0));
        } else if (j.contains("n")) {
            c.scheme = GosScheme::order_statistics(j["n"].get<int>());
        }
        if (j.contains("prior")) c.prior = {j["prior"].value("a", 2.0), j["prior"].value("b", 1.0)};
        if (j.contains("losses")) {
            c.losses.clear();
            for (const auto& l : j["losses"]) {
                const auto fam = parse_loss_family(l.at("family").get<std::string>());
                c.losses.push_back({fam, fam == LossFamily::sel ? 0.0 : l.at("c").get<double>()});
            }
        }
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j["methods"]) {
                const auto s = m.get<std::string>();
                if (s == "lindley") c.methods.push_back(Method::lindley);
                else if (s == "mcmc") c.methods.push_back(Method::mcmc);
                else throw domain_error("SimConfig: unknown method '" + s + "'");
            }
        }
        c.replications = j.value("replications", c.replications);
        if (j.contains("mcmc")) {
            c.mcmc.chain_length = j["mcmc"].value("chain_length", c.mcmc.chain_length);
            c.mcmc.burn_in = j["mcmc"].value("burn_in", c.mcmc.burn_in);
        }
        c.master_seed = j.value("master_seed", c.master_seed);
        c.failure_cap = j.value("failure_cap", c.failure_cap);
        c.threads = j.value("threads", c.threads);
        if (j.value("likelihood", std::string("corrected")) == "paper_literal") c.mode = LikelihoodMode::paper_literal;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("SimConfig JSON: ") + e.what());
    }
    c.validate();
    return c;
}

// ---- Tables ----

enum class TableId { table1, table2, table3 };

inline TableId parse_table_id(int id) {
    switch (id) {
    case 1: return TableId::table1;
    case 2: return TableId::table2;
    case 3: return TableId::table3;
    }
    std::ostringstream os;
    os << "unknown table " << id << " (expected 1, 2 or 3)";
    throw domain_error(os.str());
}

struct TableRow {
    std::string prior; // "I" or "II"
    Prior prior_values;
    LossSpec loss;
    double theta = 0.0;
    int n = 0;
    CellResult result;
};

struct TableSpec {
    std::vector<int> ns;
    std::vector<LossSpec> losses;
};

inline TableSpec table_spec(TableId id) {
    switch (id) {
    case TableId::table1: return {{10, 20, 30, 40, 50}, {LossSpec::sel()}};
    case TableId::table2: return {{10, 30, 50}, {LossSpec::linex(0.5), LossSpec::linex(1.0), LossSpec::linex(-0.5)}};
    case TableId::table3: return {{10, 30, 50}, {LossSpec::ge(0.5), LossSpec::ge(1.0), LossSpec::ge(-0.5)}};
    }
    return {};
}

struct TableOptions {
    std::size_t replications = 1000;
    std::uint64_t master_seed = 1;
    McmcConfig mcmc{10000, 2000, 0.05, 0, 0.5};
    double failure_cap = 0.01;
    unsigned threads = 0;
};

/// Every (loss, prior, theta, n) cell of the table; cell j gets seed derive_seed(master, j).
inline std::vector<TableRow> reproduce_table(TableId id, const TableOptions& opt) {
    const auto spec = table_spec(id);
    const std::vector<std::pair<std::string, Prior>> priors{{"I", Prior{2.0, 1.0}}, {"II", Prior{2.0, 2.0}}};
    std::vector<TableRow> rows;
    std::uint64_t cell = 0;
    for (const auto& loss : spec.losses)
        for (const auto& [pname, pr] : priors)
            for (double th : {0.3, 0.6})
                for (int n : spec.ns) {
                    SimConfig cfg;
                    cfg.theta_true = th;
                    cfg.scheme = GosScheme::order_statistics(n);
                    cfg.prior = pr;
                    cfg.losses = {loss};
                    cfg.replications = opt.replications;
                    cfg.mcmc = opt.mcmc;
                    cfg.master_seed = derive_seed(opt.master_seed, cell++);
                    cfg.failure_cap = opt.failure_cap;
                    cfg.threads = opt.threads;
                    rows.push_back({pname, pr, loss, th, n, run_cell(cfg)});
                }
    return rows;
}

/// One line per cell: Lindley and MCMC AE/AB/MSE side by side.
inline std::string table_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "prior,a,b,loss,c,theta,n,lindley_ae,lindley_ab,lindley_mse,mcmc_ae,mcmc_ab,mcmc_mse,replications,failures,"
          "status\n";
    for (const auto& r : rows) {
        os << r.prior << ',' << r.prior_values.a << ',' << r.prior_values.b << ',' << to_string(r.loss.family) << ','
           << r.loss.c << ',' << r.theta << ',' << r.n;
        for (Method m : {Method::lindley, Method::mcmc}) {
            const auto it = std::find_if(r.result.cells.begin(), r.result.cells.end(),
                                         [&](const SimCell& c) { return c.method == m; });
            if (it == r.result.cells.end() || r.result.aborted) os << ",NA,NA,NA";
            else os << ',' << it->ae << ',' << it->ab << ',' << it->mse;
        }
        os << ',' << r.result.replications << ',' << r.result.failures << ',' << r.result.status() << '\n';
    }
    return os.str();
}

} // namespace hlg
