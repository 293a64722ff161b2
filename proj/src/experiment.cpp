#include "betatri/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "betatri/bounds.hpp"
#include "betatri/graph.hpp"
#include "betatri/rng.hpp"
#include "betatri/serialize.hpp"

namespace betatri {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void experiment_config::validate() const {
    if (design.has_value() == mu.has_value())
        throw std::domain_error("configure exactly one of block design / explicit mu");
    if (replicates < 1) throw std::domain_error("need at least one replicate");
    if (n_list.empty()) throw std::domain_error("size list is empty");
    if (!std::is_sorted(n_list.begin(), n_list.end()) ||
        std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
        throw std::domain_error("size list must be strictly ascending");
    if (mu && (n_list.size() != 1 || n_list[0] != mu->size()))
        throw std::domain_error("with explicit mu the size list must be exactly {mu.size()}");
    if (threads < 1) throw std::domain_error("thread count must be at least 1");
}

hetero_vector experiment_config::mu_for(std::size_t n) const {
    if (design) return block_mu(*design, n);
    if (mu->size() != n) throw std::domain_error("explicit mu does not match requested size");
    return *mu;
}

std::vector<std::uint64_t> run_replicates(const experiment_config& config, std::size_t n) {
    config.validate();
    const model_spec spec(config.mu_for(n));
    const std::size_t r_total = config.replicates;
    std::vector<std::uint64_t> counts(r_total, 0);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const std::uint64_t seed = derive_seed(config.master_seed, n, r);
            const graph_sample g = sample_graph(spec, seed);
            counts[r] = count_triangles_wedge(g);
        }
    };

    const unsigned workers = std::min<std::size_t>(config.threads, r_total);
    if (workers <= 1) {
        worker(0, r_total);
    } else {
        const std::size_t chunk = (r_total + workers - 1) / workers;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(begin + chunk, r_total);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return counts;
}

double empirical_kolmogorov(std::span<const double> samples) {
    if (samples.empty()) throw std::domain_error("Kolmogorov distance of an empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double r = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = std_normal_cdf(sorted[i]);
        const double upper = std::abs(static_cast<double>(i + 1) / r - cdf);
        const double lower = std::abs(static_cast<double>(i) / r - cdf);
        d = std::max({d, upper, lower});
    }
    return d;
}

lln_stats lln_check(std::span<const std::uint64_t> counts, const hetero_vector& mu) {
    if (counts.empty()) throw std::domain_error("LLN check of an empty sample");
    const double l2p = norm_pow(mu, 2.0);
    const double scale = 6.0 / (l2p * l2p * l2p);
    lln_stats out;
    for (std::uint64_t t : counts) out.mean += scale * static_cast<double>(t);
    out.mean /= static_cast<double>(counts.size());
    if (counts.size() > 1) {
        double ss = 0.0;
        for (std::uint64_t t : counts) {
            const double dev = scale * static_cast<double>(t) - out.mean;
            ss += dev * dev;
        }
        out.sd = std::sqrt(ss / static_cast<double>(counts.size() - 1));
    }
    return out;
}

regression_fit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::domain_error("regression needs matching lengths");
    const std::size_t n = x.size();
    if (n < 3) throw std::domain_error("regression needs at least 3 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::domain_error("regression needs non-constant x");
    regression_fit fit;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = y[i] - (intercept + fit.slope * x[i]);
        ssr += resid * resid;
    }
    fit.stderr_slope = std::sqrt(std::max(ssr, 0.0) / static_cast<double>(n - 2) / sxx);
    return fit;
}

clt_report run_experiment(const experiment_config& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    clt_report report;
    std::vector<std::vector<std::uint64_t>> all_counts;
    std::vector<std::vector<double>> all_normalized;
    for (std::size_t n : config.n_list) {
        const hetero_vector mu = config.mu_for(n);
        clt_entry entry;
        entry.n = n;
        entry.moments = config.design ? compute_moments(*config.design, n) : compute_moments(mu);

        const auto counts = run_replicates(config, n);
        std::vector<double> normalized(counts.size());
        for (std::size_t r = 0; r < counts.size(); ++r)
            normalized[r] = normalize(static_cast<double>(counts[r]), entry.moments,
                                      config.use_exact_moments);
        entry.d_kolmogorov = empirical_kolmogorov(normalized);
        entry.lln = lln_check(counts, mu);
        report.entries.push_back(entry);
        all_counts.push_back(counts);
        all_normalized.push_back(std::move(normalized));
    }

    if (report.entries.size() >= 3) {
        std::vector<double> log_n, log_d;
        for (const auto& e : report.entries) {
            log_n.push_back(std::log(static_cast<double>(e.n)));
            log_d.push_back(std::log(e.d_kolmogorov));
        }
        report.rate = fit_line(log_n, log_d);
    }
    if (config.design) report.eta_value = eta(config.design->alpha);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (config.output_stem) {
        const auto doc = experiment_document(config, report);
        atomic_write_file(config.output_stem->string() + ".json", doc.dump(2) + "\n");

        std::ostringstream csv;
        csv.precision(17);
        csv << "n,replicate,t_n,f_n\n";
        for (std::size_t idx = 0; idx < report.entries.size(); ++idx)
            for (std::size_t r = 0; r < all_counts[idx].size(); ++r)
                csv << report.entries[idx].n << ',' << r << ',' << all_counts[idx][r] << ','
                    << all_normalized[idx][r] << '\n';
        atomic_write_file(config.output_stem->string() + ".csv", csv.str());
    }
    return report;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace betatri
