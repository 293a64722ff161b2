#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betatri/graph.hpp"
#include "betatri/vecnorm.hpp"

namespace betatri {

// Heterogeneous random graph: edge (i, j) is present independently with
// probability p_ij = mu_i mu_j / (1 + mu_i mu_j). Working in the mu
// parametrization avoids the overflow the logistic form hits for large
// |beta|.
double edge_probability(double mu_i, double mu_j);

// mu_i = exp(beta_i); throws std::range_error when exp over/underflows.
hetero_vector mu_from_beta(std::span<const double> beta);

// Blockwise-constant parameter design: vertices are partitioned into K
// blocks of sizes ~ pi_r * n and block r gets mu = theta_r * n^{-alpha/2}.
struct block_design {
    unsigned blocks = 1;
    std::vector<double> pi;    // sums to 1
    std::vector<double> theta; // positive
    double alpha = 0.5;        // in (0, 1)

    block_design(unsigned k, std::vector<double> pi_in, std::vector<double> theta_in,
                 double alpha_in);
};

// Deterministic partition sizes: round(pi_r * n) with the rounding residual
// assigned to the largest block.
std::vector<std::size_t> block_sizes(const block_design& design, std::size_t n);

// Materialize the design at size n: block r contributes block_sizes[r]
// vertices with mu = theta_r * n^{-alpha/2}, laid out contiguously.
hetero_vector block_mu(const block_design& design, std::size_t n);

struct model_spec {
    hetero_vector mu;
    std::string label;

    explicit model_spec(hetero_vector mu_in, std::string label_in = {})
        : mu(std::move(mu_in)), label(std::move(label_in)) {}
};

// Finite-n surrogates for the asymptotic sparsity/heterogeneity conditions.
// These are diagnostics only: the conditions constrain limits, so no
// finite-n pass/fail verdict is emitted.
struct condition_report {
    double mu_max = 0.0;     // sparsity wants this small
    double l2_norm = 0.0;    // sparsity wants this large
    double l32_ratio = 0.0;  // ||mu||_{3/2}^{3/2} / ||mu||_2^6
    double ratio_cond = 0.0; // (mu_max/mu_min) / ||mu||_2^{3/2}
};

condition_report diagnose_conditions(const hetero_vector& mu);

// One Bernoulli draw per potential edge, keyed by (seed, i, j); the sampled
// graph is a pure function of (mu, seed) regardless of evaluation order.
graph_sample sample_graph(const model_spec& spec, std::uint64_t seed);

// mu input files: either one decimal float per line, or a JSON array of
// numbers. Validation errors carry the 1-based line (or element) index.
hetero_vector load_mu_file(const std::filesystem::path& path);
hetero_vector parse_mu_text(const std::string& text, const std::string& origin);

} // namespace betatri
