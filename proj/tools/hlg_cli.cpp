#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hlg/hlg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything needed to rerun a command: its arguments, seed and outputs.
struct RunManifest {
    std::string subcommand;
    json parameters = json::object();
    std::optional<std::uint64_t> seed;
    std::vector<std::string> artifacts;
    std::vector<std::string> argv;

    json to_json() const {
        json j{{"subcommand", subcommand}, {"parameters", parameters}, {"artifacts", artifacts}, {"argv", argv}};
        j["seed"] = seed ? json(*seed) : json(nullptr);
        return j;
    }
};

std::string default_out_dir() {
    if (const char* env = std::getenv("HLG_OUT_DIR"); env && *env) return env;
    return "hlg_out";
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw hlg::io_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw hlg::io_error("write failed for '" + path.string() + "'");
    return path.string();
}

json report_json(const hlg::MomentReport& r) {
    json j{{"closed_form", r.closed_form},
           {"oracle", r.oracle},
           {"abs_discrepancy", r.abs_discrepancy},
           {"oracle_kind", hlg::to_string(r.oracle_kind)}};
    if (r.oracle_kind == hlg::OracleKind::monte_carlo) j["oracle_std_error"] = r.oracle_std_error;
    return j;
}

json estimate_json(const std::string& method, const hlg::LossSpec& loss, double value) {
    json j{{"method", method}, {"loss", hlg::to_string(loss.family)}, {"value", value}};
    j["c"] = loss.family == hlg::LossFamily::sel ? json(nullptr) : json(loss.c);
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-logistic-geometric distribution under generalized order statistics"};
    app.require_subcommand(1);
    std::string out_dir = default_out_dir();
    app.add_option("--out-dir", out_dir, "Directory for manifests and CSV outputs (env HLG_OUT_DIR)");

    RunManifest manifest;
    for (int i = 0; i < argc; ++i) manifest.argv.emplace_back(argv[i]);

    // ---- dist ----
    auto* dist = app.add_subcommand("dist", "pdf, cdf, quantile or sample of HLG(theta)");
    dist->require_subcommand(1);
    double theta = 0.5;
    double x = 0.0, u = 0.5;
    std::size_t count = 100;
    std::uint64_t seed = 1;
    std::string output;
    for (const char* what : {"pdf", "cdf"}) {
        auto* c = dist->add_subcommand(what, std::string(what) + " at x");
        c->add_option("--theta", theta)->required()->check(CLI::Range(0.0, 1.0));
        c->add_option("--x", x)->required();
    }
    auto* dq = dist->add_subcommand("quantile", "inverse cdf at u");
    dq->add_option("--theta", theta)->required()->check(CLI::Range(0.0, 1.0));
    dq->add_option("--u", u)->required();
    auto* ds = dist->add_subcommand("sample", "iid draws written as CSV");
    ds->add_option("--theta", theta)->required()->check(CLI::Range(0.0, 1.0));
    ds->add_option("--n", count)->required()->check(CLI::PositiveNumber);
    ds->add_option("--seed", seed);
    ds->add_option("--output", output, "CSV path (default <out-dir>/sample.csv)");

    // ---- moments ----
    auto* mom = app.add_subcommand("moments", "gos moments and MGFs with an independent oracle");
    mom->require_subcommand(1);
    int n = 0, r = 1, s = 0, p_ord = 0, q_ord = 0;
    double m = 0.0, k = 1.0;
    std::optional<double> t1, t2;
    std::string oracle = "quadrature";
    std::size_t reps = 100000;
    auto add_scheme = [&](CLI::App* c) {
        c->add_option("--n", n)->required();
        c->add_option("--m", m)->required();
        c->add_option("--k", k)->required();
        c->add_option("--r", r)->required();
        c->add_option("--theta", theta)->required()->check(CLI::Range(0.0, 1.0));
    };
    auto* mm = mom->add_subcommand("marginal", "E[X(r)^p] or the MGF of X(r) at --t");
    add_scheme(mm);
    mm->add_option("--p", p_ord, "moment order 1..4");
    mm->add_option("--t", t1, "evaluate the MGF at t instead of a moment");
    mm->add_option("--oracle", oracle)->check(CLI::IsMember({"quadrature", "mc"}));
    mm->add_option("--reps", reps);
    mm->add_option("--seed", seed);
    auto* mj = mom->add_subcommand("joint", "E[X(r)^p X(s)^q] or the joint MGF at (--t, --t2)");
    add_scheme(mj);
    mj->add_option("--s", s)->required();
    mj->add_option("--p", p_ord);
    mj->add_option("--q", q_ord);
    mj->add_option("--t", t1);
    mj->add_option("--t2", t2);
    mj->add_option("--oracle", oracle)->check(CLI::IsMember({"quadrature", "mc"}));
    mj->add_option("--reps", reps);
    mj->add_option("--seed", seed);
    auto* mr = mom->add_subcommand("recurrence", "residual of the moment recurrence relation");
    add_scheme(mr);
    mr->add_option("--s", s, "second rank for the joint relation");
    mr->add_option("--p", p_ord)->required();
    mr->add_option("--q", q_ord);
    std::string source = "quadrature";
    mr->add_option("--source", source, "how the moments entering the relation are computed")
        ->check(CLI::IsMember({"quadrature", "closed_form"}));

    // ---- bayes ----
    auto* bay = app.add_subcommand("bayes", "MLE and Bayes estimates of theta");
    bay->require_subcommand(1);
    std::string data;
    double a = 2.0, b = 1.0;
    std::string loss_name = "sel";
    std::optional<double> loss_c;
    std::optional<std::size_t> chain_len, burn_in;
    std::optional<double> proposal_sd;
    bool paper_literal = false;
    std::string chain_out;
    std::map<std::string, CLI::App*> bayes_cmds;
    for (const char* what : {"mle", "lindley", "mcmc", "oracle"}) {
        auto* c = bay->add_subcommand(what);
        bayes_cmds[what] = c;
        c->add_option("--data", data, "builtin:<name>, a builtin name, or a CSV path")->required();
        c->add_flag("--paper-literal", paper_literal, "use the likelihood with theta^1 as printed");
        if (std::string(what) == "mle") continue;
        c->add_option("--a", a);
        c->add_option("--b", b);
        c->add_option("--loss", loss_name)->check(CLI::IsMember({"sel", "linex", "ge"}));
        c->add_option("--c", loss_c);
    }
    bayes_cmds["mle"]->description("maximum likelihood estimate");
    bayes_cmds["lindley"]->description("Lindley approximation");
    bayes_cmds["oracle"]->description("exact posterior expectation by quadrature");
    auto* bm = bayes_cmds["mcmc"];
    bm->description("Metropolis-Hastings estimate");
    bm->add_option("--chain", chain_len);
    bm->add_option("--burnin", burn_in);
    bm->add_option("--sd", proposal_sd);
    bm->add_option("--seed", seed);
    bm->add_option("--chain-out", chain_out, "write post-burn-in draws as CSV");

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "MLE and KS goodness of fit, with ECDF overlay CSV");
    fit->add_option("--data", data)->required();
    fit->add_option("--ecdf", output, "ECDF CSV path (default <out-dir>/<name>_ecdf.csv)");

    // ---- reproduce ----
    auto* rep = app.add_subcommand("reproduce", "rerun the simulation tables");
    int table = 1;
    std::size_t R = 1000;
    unsigned threads = 0;
    std::string config_path;
    double failure_cap = 0.01;
    auto* tab_opt = rep->add_option("--table", table)->check(CLI::IsMember({1, 2, 3}));
    rep->add_option("--R", R)->check(CLI::PositiveNumber);
    rep->add_option("--seed", seed);
    rep->add_option("--threads", threads);
    rep->add_option("--chain", chain_len);
    rep->add_option("--burnin", burn_in);
    rep->add_option("--failure-cap", failure_cap)->check(CLI::Range(0.0, 1.0));
    auto* cfg_opt = rep->add_option("--config", config_path, "JSON SimConfig for a single cell");
    tab_opt->excludes(cfg_opt);
    rep->add_option("--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    auto loss_spec = [&]() -> hlg::LossSpec {
        const auto fam = hlg::parse_loss_family(loss_name);
        if (fam == hlg::LossFamily::sel) return hlg::LossSpec::sel();
        if (!loss_c) throw usage_error("--loss " + loss_name + " requires --c");
        return {fam, *loss_c};
    };
    const auto mode = paper_literal ? hlg::LikelihoodMode::paper_literal : hlg::LikelihoodMode::corrected;

    try {
        const fs::path outd(out_dir);
        std::cout.precision(17);

        if (dist->parsed()) {
            manifest.subcommand = "dist";
            const hlg::HlgParams hp(theta);
            manifest.parameters["theta"] = theta;
            if (dist->got_subcommand("pdf")) {
                manifest.parameters.update({{"op", "pdf"}, {"x", x}});
                std::cout << hlg::pdf(hp, x) << '\n';
            } else if (dist->got_subcommand("cdf")) {
                manifest.parameters.update({{"op", "cdf"}, {"x", x}});
                std::cout << hlg::cdf(hp, x) << '\n';
            } else if (dist->got_subcommand("quantile")) {
                manifest.parameters.update({{"op", "quantile"}, {"u", u}});
                std::cout << hlg::quantile(hp, u) << '\n';
            } else {
                manifest.parameters.update({{"op", "sample"}, {"n", count}});
                manifest.seed = seed;
                std::ostringstream os;
                os.precision(17);
                os << "x\n";
                for (double v : hlg::sample(hp, count, seed)) os << v << '\n';
                const auto path = write_text(output.empty() ? outd / "sample.csv" : fs::path(output), os.str());
                manifest.artifacts.push_back(path);
                std::cout << path << '\n';
            }
        } else if (mom->parsed()) {
            manifest.subcommand = "moments";
            const hlg::GosScheme sch(n, m, k);
            const hlg::HlgParams hp(theta);
            manifest.parameters = {{"n", n}, {"m", m}, {"k", k}, {"r", r}, {"theta", theta}};
            const bool mc = oracle == "mc";
            json out;
            if (mm->parsed()) {
                manifest.parameters["op"] = "marginal";
                if (t1) {
                    manifest.parameters["t"] = *t1;
                    out = report_json(hlg::MomentReport::make(hlg::marginal_mgf(sch, r, hp, *t1),
                                                              hlg::marginal_mgf_quadrature(sch, r, hp, *t1),
                                                              hlg::OracleKind::quadrature));
                } else {
                    if (p_ord < 1) throw usage_error("moments marginal needs --p (1..4) or --t");
                    manifest.parameters["p"] = p_ord;
                    if (mc) {
                        manifest.seed = seed;
                        manifest.parameters["reps"] = reps;
                    }
                    out = report_json(mc ? hlg::marginal_moment_mc(sch, r, hp, p_ord, reps, seed)
                                         : hlg::marginal_moment(sch, r, hp, p_ord));
                }
            } else if (mj->parsed()) {
                manifest.parameters.update({{"op", "joint"}, {"s", s}});
                if (t1 || t2) {
                    const double a1 = t1.value_or(0.0), a2 = t2.value_or(0.0);
                    manifest.parameters.update({{"t", a1}, {"t2", a2}});
                    out = report_json(hlg::MomentReport::make(hlg::joint_mgf(sch, r, s, hp, a1, a2),
                                                              hlg::joint_mgf_quadrature(sch, r, s, hp, a1, a2),
                                                              hlg::OracleKind::quadrature));
                } else {
                    if (p_ord + q_ord < 1) throw usage_error("moments joint needs --p/--q or --t/--t2");
                    manifest.parameters.update({{"p", p_ord}, {"q", q_ord}});
                    if (mc) {
                        manifest.seed = seed;
                        manifest.parameters["reps"] = reps;
                    }
                    out = report_json(mc ? hlg::joint_moment_mc(sch, r, s, hp, p_ord, q_ord, reps, seed)
                                         : hlg::joint_moment(sch, r, s, hp, p_ord, q_ord));
                }
            } else {
                manifest.parameters.update({{"op", "recurrence"}, {"p", p_ord}});
                const hlg::SchemePair pair(sch);
                const auto src =
                    source == "closed_form" ? hlg::MomentSource::closed_form : hlg::MomentSource::quadrature;
                manifest.parameters["source"] = source;
                double res = 0.0;
                if (s > 0) {
                    manifest.parameters.update({{"s", s}, {"q", q_ord}});
                    res = hlg::joint_moment_recurrence_residual(pair, r, s, hp, p_ord, q_ord, src);
                } else {
                    res = hlg::marginal_moment_recurrence_residual(pair, r, hp, p_ord, src);
                }
                out = {{"relation", s > 0 ? "joint" : "marginal"}, {"residual", res}, {"terms", source}};
            }
            print_json(out);
        } else if (bay->parsed()) {
            manifest.subcommand = "bayes";
            const auto ds = hlg::load_dataset(data);
            ds.validate();
            const auto sample = hlg::GosSample::order_statistics(ds.values);
            const hlg::Prior prior{a, b};
            manifest.parameters = {{"data", data}, {"likelihood", hlg::to_string(mode)}};
            json out{{"dataset", ds.name}, {"n", sample.n()}, {"likelihood", hlg::to_string(mode)}};
            json est = json::array();
            if (bayes_cmds["mle"]->parsed()) {
                manifest.parameters["op"] = "mle";
                const double th = hlg::mle(sample, mode);
                out["theta_hat"] = th;
                est.push_back({{"method", "mle"}, {"loss", nullptr}, {"c", nullptr}, {"value", th}});
            } else {
                const auto loss = loss_spec();
                prior.validate();
                manifest.parameters.update({{"a", a}, {"b", b}, {"loss", loss_name}});
                if (loss.family != hlg::LossFamily::sel) manifest.parameters["c"] = loss.c;
                out["prior"] = {{"a", a}, {"b", b}};
                if (bayes_cmds["lindley"]->parsed()) {
                    manifest.parameters["op"] = "lindley";
                    est.push_back(estimate_json("lindley", loss, hlg::lindley_estimate(sample, prior, loss, mode)));
                } else if (bayes_cmds["oracle"]->parsed()) {
                    manifest.parameters["op"] = "oracle";
                    est.push_back(
                        estimate_json("quadrature", loss, hlg::bayes_estimate_quadrature(sample, prior, loss, mode)));
                } else {
                    manifest.parameters["op"] = "mcmc";
                    manifest.seed = seed;
                    auto cfg = hlg::default_mcmc_config(sample, prior, seed, mode);
                    if (chain_len) cfg.chain_length = *chain_len;
                    if (burn_in) cfg.burn_in = *burn_in;
                    if (proposal_sd) cfg.proposal_sd = *proposal_sd;
                    manifest.parameters.update({{"chain", cfg.chain_length},
                                                {"burnin", cfg.burn_in},
                                                {"sd", cfg.proposal_sd},
                                                {"init", cfg.init}});
                    const auto chain = hlg::mh_chain(sample, prior, cfg, mode);
                    const auto draws = chain.post_burn_in();
                    est.push_back(estimate_json("mcmc", loss, hlg::mcmc_estimate(draws, loss)));
                    out["mcmc"] = {{"seed", seed},
                                   {"chain_length", cfg.chain_length},
                                   {"burn_in", cfg.burn_in},
                                   {"proposal_sd", cfg.proposal_sd},
                                   {"acceptance_rate", chain.acceptance_rate()},
                                   {"mcse", hlg::mcmc_standard_error(draws, loss)}};
                    if (!chain_out.empty()) {
                        if (fs::path(chain_out).has_parent_path()) fs::create_directories(fs::path(chain_out).parent_path());
                        hlg::write_chain_csv(chain_out, draws);
                        manifest.artifacts.push_back(chain_out);
                    }
                }
            }
            out["estimates"] = est;
            print_json(out);
        } else if (fit->parsed()) {
            manifest.subcommand = "fit";
            manifest.parameters = {{"data", data}};
            const auto ds = hlg::load_dataset(data);
            const auto rep_ = hlg::fit_report(ds);
            const fs::path ecdf =
                output.empty() ? outd / (fs::path(ds.name).stem().string() + "_ecdf.csv") : fs::path(output);
            if (ecdf.has_parent_path()) fs::create_directories(ecdf.parent_path());
            hlg::write_ecdf_csv(ecdf.string(), hlg::ecdf_overlay(ds.values, hlg::HlgParams(rep_.theta_hat)));
            manifest.artifacts.push_back(ecdf.string());
            auto j = hlg::to_json(rep_);
            j["ecdf_csv"] = ecdf.string();
            print_json(j);
        } else if (rep->parsed()) {
            manifest.subcommand = "reproduce";
            manifest.seed = seed;
            std::string csv;
            fs::path dest;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw hlg::io_error("cannot open config '" + config_path + "'");
                json j;
                try {
                    j = json::parse(in);
                } catch (const json::parse_error& e) {
                    throw hlg::io_error("config '" + config_path + "': " + e.what());
                }
                auto cfg = hlg::sim_config_from_json(j);
                if (threads) cfg.threads = threads;
                manifest.parameters = {{"config", hlg::to_json(cfg)}};
                manifest.seed = cfg.master_seed;
                const auto res = hlg::run_cell(cfg);
                std::ostringstream os;
                os.precision(10);
                os << "method,loss,c,ae,ab,mse,mse_se,replications,failures,status\n";
                for (const auto& c : res.cells)
                    os << hlg::to_string(c.method) << ',' << hlg::to_string(c.loss.family) << ',' << c.loss.c << ','
                       << c.ae << ',' << c.ab << ',' << c.mse << ',' << c.mse_se << ',' << res.replications << ','
                       << res.failures << ',' << res.status() << '\n';
                csv = os.str();
                dest = output.empty() ? outd / "cell.csv" : fs::path(output);
                if (res.aborted) std::cerr << "warning: cell aborted: " << res.abort_reason << '\n';
            } else {
                hlg::TableOptions opt;
                opt.replications = R;
                opt.master_seed = seed;
                opt.threads = threads;
                opt.failure_cap = failure_cap;
                if (chain_len) opt.mcmc.chain_length = *chain_len;
                if (burn_in) opt.mcmc.burn_in = *burn_in;
                opt.mcmc.validate();
                manifest.parameters = {{"table", table},
                                       {"R", R},
                                       {"failure_cap", failure_cap},
                                       {"chain", opt.mcmc.chain_length},
                                       {"burnin", opt.mcmc.burn_in}};
                const auto rows = hlg::reproduce_table(hlg::parse_table_id(table), opt);
                csv = hlg::table_csv(rows);
                dest = output.empty() ? outd / ("table" + std::to_string(table) + ".csv") : fs::path(output);
                for (const auto& row : rows)
                    if (row.result.aborted)
                        std::cerr << "warning: theta=" << row.theta << " n=" << row.n << " prior " << row.prior
                                  << " aborted: " << row.result.abort_reason << '\n';
            }
            manifest.artifacts.push_back(write_text(dest, csv));
            std::cout << csv;
        }

        fs::create_directories(outd);
        write_text(outd / (manifest.subcommand + "_manifest.json"), manifest.to_json().dump(2) + "\n");
        return exit_ok;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const hlg::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const hlg::numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const hlg::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}
