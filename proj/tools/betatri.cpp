// Command-line front end: subcommands over the model, moment, bound,
// oracle, and Monte Carlo modules. Every subcommand writes one JSON report
// (plus a CSV for the sweep commands) and prints a short summary on stdout.
//
// Exit codes: 0 success, 1 validation/usage error, 2 resource-cap error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betatri/errors.hpp"
#include "betatri/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_double_list(const std::string& text, char sep, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, sep)) {
        if (token.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw std::domain_error(what + ": not a number: '" + token + "'");
        }
        if (used != token.size())
            throw std::domain_error(what + ": trailing garbage in '" + token + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::domain_error(what + ": empty list");
    return out;
}

// "K=2,pi=0.5:0.5,theta=1:2,alpha=0.4"; pi defaults to uniform weights.
betatri::block_design parse_design(const std::string& text) {
    std::optional<unsigned> k;
    std::optional<std::vector<double>> pi, theta;
    std::optional<double> alpha;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::domain_error("design: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "K" || key == "k") k = static_cast<unsigned>(std::stoul(value));
        else if (key == "pi") pi = parse_double_list(value, ':', "design pi");
        else if (key == "theta") theta = parse_double_list(value, ':', "design theta");
        else if (key == "alpha") alpha = std::stod(value);
        else throw std::domain_error("design: unknown key '" + key + "'");
    }
    if (!k || !theta || !alpha)
        throw std::domain_error("design needs K=, theta= and alpha= (pi= optional)");
    if (!pi) pi = std::vector<double>(*k, 1.0 / static_cast<double>(*k));
    return betatri::block_design(*k, std::move(*pi), std::move(*theta), *alpha);
}

// A mu argument is either a readable file (text or JSON array) or an inline
// comma-separated list.
betatri::hetero_vector parse_mu_input(const std::string& arg) {
    if (fs::exists(arg)) return betatri::load_mu_file(arg);
    if (arg.find(',') != std::string::npos) {
        const auto values = parse_double_list(arg, ',', "inline mu");
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] <= 0.0)
                throw std::domain_error("inline mu: entry " + std::to_string(i + 1) +
                                        " must be positive");
        return betatri::hetero_vector(values);
    }
    throw std::domain_error("mu argument is neither an existing file nor an inline list: " + arg);
}

struct common_options {
    std::string out_dir;
    unsigned threads = 1;
};

fs::path report_path(const common_options& common, const std::string& name) {
    return fs::path(common.out_dir) / name;
}

void write_report(const common_options& common, const std::string& file_name, json document) {
    betatri::atomic_write_file(report_path(common, file_name), document.dump(2) + "\n");
}

json envelope(const std::string& command, json config, json result, double wall_seconds) {
    json j;
    j["schema_version"] = betatri::kSchemaVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    j["metadata"] = {{"wall_seconds", wall_seconds}};
    return j;
}

struct model_args {
    std::string mu_arg;
    std::string design_arg;
    std::size_t n = 0;

    betatri::hetero_vector resolve(json& config_echo) const {
        if (!mu_arg.empty() && !design_arg.empty())
            throw std::domain_error("give either --mu or --design, not both");
        if (!mu_arg.empty()) {
            config_echo["mu_input"] = mu_arg;
            return parse_mu_input(mu_arg);
        }
        if (design_arg.empty()) throw std::domain_error("one of --mu / --design is required");
        if (n < 2) throw std::domain_error("--design needs --n");
        const auto design = parse_design(design_arg);
        config_echo["design"] = {{"blocks", design.blocks},
                                 {"pi", design.pi},
                                 {"theta", design.theta},
                                 {"alpha", design.alpha}};
        config_echo["n"] = n;
        return block_mu(design, n);
    }
};

int run_cli(int argc, char** argv) {
    CLI::App app{"sparse beta-model triangle statistics"};
    app.require_subcommand(1);
    app.set_config("--config");

    common_options common;
    const char* env_dir = std::getenv("BETATRI_OUT_DIR");
    common.out_dir = env_dir ? env_dir : ".";
    app.add_option("--out-dir", common.out_dir,
                   "directory for report files (env BETATRI_OUT_DIR)")
        ->capture_default_str();
    app.add_option("--threads", common.threads, "worker thread cap; never changes results")
        ->capture_default_str();

    // ---- simulate ----------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "sample one graph and count its triangles");
    model_args sim_model;
    std::uint64_t sim_seed = 0;
    std::string sim_dump;
    sim->add_option("--mu", sim_model.mu_arg, "mu file or inline list");
    sim->add_option("--design", sim_model.design_arg, "block design spec");
    sim->add_option("--n", sim_model.n, "graph size (with --design)");
    sim->add_option("--seed", sim_seed, "sampling seed")->capture_default_str();
    sim->add_option("--dump-edges", sim_dump, "also write the edge list to this file");

    // ---- moments ------------------------------------------------------
    auto* mom = app.add_subcommand("moments", "exact and asymptotic triangle moments");
    model_args mom_model;
    mom->add_option("--mu", mom_model.mu_arg, "mu file or inline list");
    mom->add_option("--design", mom_model.design_arg, "block design spec");
    mom->add_option("--n", mom_model.n, "graph size (with --design)");

    // ---- bound --------------------------------------------------------
    auto* bnd = app.add_subcommand("bound", "Kolmogorov-rate bound terms");
    model_args bnd_model;
    bool bnd_btilde = false;
    std::size_t bnd_btilde_cap = 150;
    bnd->add_option("--mu", bnd_model.mu_arg, "mu file or inline list");
    bnd->add_option("--design", bnd_model.design_arg, "block design spec");
    bnd->add_option("--n", bnd_model.n, "graph size (with --design)");
    bnd->add_flag("--btilde", bnd_btilde, "also evaluate the proof-side sums (O(n^4), capped)");
    bnd->add_option("--btilde-max-n", bnd_btilde_cap, "resource cap for the btilde sums")
        ->capture_default_str();

    // ---- diagnose -------------------------------------------------------
    auto* diag = app.add_subcommand("diagnose", "sparsity/heterogeneity condition surrogates");
    model_args diag_model;
    diag->add_option("--mu", diag_model.mu_arg, "mu file or inline list");
    diag->add_option("--design", diag_model.design_arg, "block design spec");
    diag->add_option("--n", diag_model.n, "graph size (with --design)");

    // ---- clt / rate ------------------------------------------------------
    auto add_experiment_options = [](CLI::App* cmd, model_args& margs, std::string& n_list,
                                     std::size_t& replicates, std::uint64_t& seed,
                                     bool& use_asym) {
        cmd->add_option("--mu", margs.mu_arg, "mu file or inline list");
        cmd->add_option("--design", margs.design_arg, "block design spec");
        cmd->add_option("--n-list", n_list, "comma-separated graph sizes");
        cmd->add_option("-R,--replicates", replicates, "Monte Carlo replicates per size")
            ->required();
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_flag("--use-asym", use_asym,
                      "normalize with asymptotic instead of exact moments");
    };

    auto* clt = app.add_subcommand("clt", "Monte Carlo normality check");
    model_args clt_model;
    std::string clt_sizes;
    std::size_t clt_reps = 0;
    std::uint64_t clt_seed = 0;
    bool clt_asym = false;
    add_experiment_options(clt, clt_model, clt_sizes, clt_reps, clt_seed, clt_asym);

    auto* rate = app.add_subcommand("rate", "Kolmogorov-distance rate sweep over sizes");
    model_args rate_model;
    std::string rate_sizes;
    std::size_t rate_reps = 0;
    std::uint64_t rate_seed = 0;
    bool rate_asym = false;
    add_experiment_options(rate, rate_model, rate_sizes, rate_reps, rate_seed, rate_asym);

    // ---- oracle-check -----------------------------------------------------
    auto* oracle = app.add_subcommand("oracle-check", "exhaustive-state verification suite");
    std::size_t oracle_n = 4;
    unsigned oracle_trials = 20;
    std::uint64_t oracle_seed = 1;
    oracle->add_option("--n", oracle_n, "graph size (state space is 2^C(n,2))")
        ->capture_default_str();
    oracle->add_option("--trials", oracle_trials, "random parameter draws")
        ->capture_default_str();
    oracle->add_option("--seed", oracle_seed, "corpus seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // map CLI11's assorted parse codes onto the 0/1 contract
        return app.exit(e) == 0 ? 0 : 1;
    }

    auto make_experiment_config = [&common](const model_args& margs, const std::string& sizes,
                                            std::size_t reps, std::uint64_t seed, bool use_asym,
                                            const std::string& stem) {
        betatri::experiment_config cfg;
        if (!margs.design_arg.empty()) {
            cfg.design = parse_design(margs.design_arg);
            if (sizes.empty()) throw std::domain_error("--n-list is required with --design");
            for (double v : parse_double_list(sizes, ',', "n list"))
                cfg.n_list.push_back(static_cast<std::size_t>(v));
        } else if (!margs.mu_arg.empty()) {
            cfg.mu = parse_mu_input(margs.mu_arg);
            cfg.n_list = {cfg.mu->size()};
        } else {
            throw std::domain_error("one of --mu / --design is required");
        }
        cfg.replicates = reps;
        cfg.master_seed = seed;
        cfg.use_exact_moments = !use_asym;
        cfg.threads = common.threads;
        cfg.output_stem = report_path(common, stem);
        return cfg;
    };

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    if (sim->parsed()) {
        json config;
        const auto mu = sim_model.resolve(config);
        config["seed"] = sim_seed;
        const betatri::model_spec spec(mu);
        const auto g = betatri::sample_graph(spec, sim_seed);
        const auto triangles = betatri::count_triangles_wedge(g);
        if (!sim_dump.empty()) {
            std::ostringstream edges;
            betatri::write_edge_list(edges, g);
            betatri::atomic_write_file(sim_dump, edges.str());
            config["edge_dump"] = sim_dump;
        }
        json result = {{"n", g.vertex_count()},
                       {"edges", g.edge_count()},
                       {"triangles", triangles}};
        write_report(common, "simulate.json", envelope("simulate", config, result, elapsed()));
        std::cout << "n = " << g.vertex_count() << ", edges = " << g.edge_count()
                  << ", triangles = " << triangles << "\n";
        return 0;
    }

    if (mom->parsed()) {
        json config;
        const auto mu = mom_model.resolve(config);
        // block designs get the O(K^3) exact path; same values, no n^2 matrices
        const auto report = mom_model.design_arg.empty()
                                ? betatri::compute_moments(mu)
                                : betatri::compute_moments(parse_design(mom_model.design_arg),
                                                           mom_model.n);
        write_report(common, "moments.json", envelope("moments", config, report, elapsed()));
        std::cout << "exact mean = " << report.exact_mean << " (asym " << report.asym_mean
                  << ", ratio " << report.mean_ratio << ")\n"
                  << "exact var  = " << report.exact_var << " (asym " << report.asym_var
                  << ", ratio " << report.var_ratio << ")\n";
        return 0;
    }

    if (bnd->parsed()) {
        json config;
        const auto mu = bnd_model.resolve(config);
        std::optional<double> alpha;
        if (!bnd_model.design_arg.empty()) alpha = parse_design(bnd_model.design_arg).alpha;
        betatri::btilde_options opts;
        opts.max_n = bnd_btilde_cap;
        const auto report = betatri::compute_bound_report(mu, bnd_btilde, alpha, opts);
        write_report(common, "bound.json", envelope("bound", config, report, elapsed()));
        std::cout << "rate (C = 1): " << report.rate_with_unit_constant;
        if (report.eta_value) std::cout << ", eta(alpha) = " << *report.eta_value;
        std::cout << "\n";
        return 0;
    }

    if (diag->parsed()) {
        json config;
        const auto mu = diag_model.resolve(config);
        const auto report = betatri::diagnose_conditions(mu);
        write_report(common, "diagnose.json", envelope("diagnose", config, report, elapsed()));
        std::cout << "mu_max = " << report.mu_max << ", ||mu||_2 = " << report.l2_norm
                  << ", l32_ratio = " << report.l32_ratio
                  << ", ratio_cond = " << report.ratio_cond << "\n"
                  << "(surrogates only; the asymptotic conditions have no finite-n verdict)\n";
        return 0;
    }

    if (clt->parsed() || rate->parsed()) {
        const bool is_rate = rate->parsed();
        const std::string stem = is_rate ? "rate" : "clt";
        const auto cfg = is_rate ? make_experiment_config(rate_model, rate_sizes, rate_reps,
                                                          rate_seed, rate_asym, stem)
                                 : make_experiment_config(clt_model, clt_sizes, clt_reps,
                                                          clt_seed, clt_asym, stem);
        if (is_rate && cfg.n_list.size() < 3)
            throw std::domain_error("rate sweep needs at least 3 sizes");
        const auto report = betatri::run_experiment(cfg);

        if (is_rate) {
            // two-column CSV for external plotting
            std::ostringstream sweep;
            sweep.precision(17);
            sweep << "log_n,log_d_kolmogorov\n";
            for (const auto& e : report.entries)
                sweep << std::log(static_cast<double>(e.n)) << ',' << std::log(e.d_kolmogorov)
                      << '\n';
            betatri::atomic_write_file(report_path(common, "rate_loglog.csv"), sweep.str());
        }
        for (const auto& e : report.entries)
            std::cout << "n = " << e.n << ": d_K = " << e.d_kolmogorov
                      << ", lln ratio = " << e.lln.mean << " (sd " << e.lln.sd << ")\n";
        if (report.rate) {
            std::cout << "log-log slope = " << report.rate->slope << " (stderr "
                      << report.rate->stderr_slope << ")";
            if (report.eta_value) std::cout << ", -eta(alpha) = " << -*report.eta_value;
            std::cout << "\n";
        }
        return 0;
    }

    if (oracle->parsed()) {
        const auto report = betatri::run_oracle_checks(oracle_n, oracle_trials, oracle_seed);
        json config = {{"n", oracle_n}, {"trials", oracle_trials}, {"seed", oracle_seed}};
        write_report(common, "oracle_check.json",
                     envelope("oracle-check", config, report, elapsed()));
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name
                      << " (max deviation " << c.max_deviation << ")\n";
        std::cout << (report.all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
        return report.all_pass() ? 0 : 1;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const betatri::resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
