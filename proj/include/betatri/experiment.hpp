#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betatri/model.hpp"
#include "betatri/moments.hpp"

namespace betatri {

// Standard normal CDF via the complementary error function. Absolute error
// is bounded by a few ulp of erfc, well below 1e-12.
double std_normal_cdf(double x);

// Monte Carlo configuration. Exactly one of design / mu drives the model;
// with an explicit mu the size list must be {mu.size()}.
struct experiment_config {
    std::optional<block_design> design;
    std::optional<hetero_vector> mu;
    std::vector<std::size_t> n_list;
    std::size_t replicates = 0;
    std::uint64_t master_seed = 0;
    bool use_exact_moments = true;
    unsigned threads = 1;
    std::optional<std::filesystem::path> output_stem; // writes <stem>.json and <stem>.csv

    void validate() const;
    hetero_vector mu_for(std::size_t n) const;
};

// R triangle counts at size n; replicate r is seeded with
// derive_seed(master_seed, n, r), so the output is a pure function of the
// config no matter how many worker threads run.
std::vector<std::uint64_t> run_replicates(const experiment_config& config, std::size_t n);

// Exact sup-distance between the empirical CDF of the samples and the
// standard normal CDF.
double empirical_kolmogorov(std::span<const double> samples);

struct lln_stats {
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation
};

// Statistics of 6 T_n / ||mu||_2^6 across replicates; the law of large
// numbers drives the mean to 1.
lln_stats lln_check(std::span<const std::uint64_t> counts, const hetero_vector& mu);

struct regression_fit {
    double slope = 0.0;
    double stderr_slope = 0.0;
};

// Least-squares line through (x, y); needs at least 3 points so the
// residual variance is defined.
regression_fit fit_line(std::span<const double> x, std::span<const double> y);

struct clt_entry {
    std::size_t n = 0;
    double d_kolmogorov = 0.0;
    moment_report moments;
    lln_stats lln;
};

struct clt_report {
    std::vector<clt_entry> entries;
    std::optional<regression_fit> rate; // log d_K vs log n, when >= 3 sizes
    std::optional<double> eta_value;    // -eta(alpha) is the predicted slope
    double wall_seconds = 0.0;
};

// Full pipeline: replicates, normalization, Kolmogorov distance, LLN ratio,
// and the log-log rate fit across sizes. Writes <stem>.json and <stem>.csv
// atomically when an output stem is configured.
clt_report run_experiment(const experiment_config& config);

// Write content to path via a temporary file and rename, so failed runs
// never leave partial output.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

} // namespace betatri
