#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "betatri/graph.hpp"
#include "betatri/vecnorm.hpp"

namespace betatri {

// Exhaustive enumeration of all 2^m edge-indicator assignments for tiny
// graphs, with their exact probabilities. Everything downstream (moments,
// discrete gradients, the proof's B sums) can be computed against this
// state space as an independent oracle. The 2^m blowup is the point: this
// is a verification tool, never a production path.
class state_space {
public:
    static constexpr unsigned kMaxEdgeBits = 20;

    explicit state_space(const hetero_vector& mu);

    std::size_t vertex_count() const noexcept { return n_; }
    unsigned edge_count() const noexcept { return m_; }
    std::uint32_t state_count() const noexcept { return std::uint32_t{1} << m_; }
    edge_endpoints endpoints(unsigned a) const noexcept { return edges_[a]; }
    double p(unsigned a) const noexcept { return p_[a]; }
    double h(unsigned a) const noexcept { return p_[a] * (1.0 - p_[a]); }

    // Probability of a state word, composed as the product of per-edge
    // Bernoulli terms in fixed edge order.
    const std::vector<double>& probabilities() const noexcept { return prob_; }

    bool edge_present(std::uint32_t word, unsigned a) const noexcept {
        return (word >> a) & 1;
    }
    bool has_edge(std::uint32_t word, std::uint32_t i, std::uint32_t j) const;

    // E[f] over the full state space, compensated, ascending word order.
    double expectation(std::span<const double> table) const;

    // Functional tables, one value per state word.
    std::vector<double> triangle_table() const;

    // Wedge count V_a evaluated in one state.
    std::uint32_t wedge_count(std::uint32_t word, unsigned a) const;

    // Delta_ab in one state: zero when the edges are identical or disjoint,
    // otherwise the indicator of the edge joining the non-shared endpoints.
    // indicator_edge reports that edge (or -1 when structurally zero).
    int indicator_edge(unsigned a, unsigned b) const;
    double delta(std::uint32_t word, unsigned a, unsigned b) const;

private:
    std::size_t n_ = 0;
    unsigned m_ = 0;
    std::vector<edge_endpoints> edges_;
    std::vector<double> p_;
    std::vector<double> prob_;
};

// First-order discrete gradient of an arbitrary functional table:
// D_a F = sqrt(p_a q_a) (f(X_a^+) - f(X_a^-)) per state.
std::vector<double> brute_gradient(const state_space& space, std::span<const double> table,
                                   unsigned a);

// Closed forms for the normalized triangle count F_n = (T_n - E)/sqrt(Var):
//   D_a F_n   = sqrt(h_a) V_a / sqrt(Var)
//   D_ab F_n  = sqrt(h_a h_b) Delta_ab / sqrt(Var)
double closed_form_gradient(const state_space& space, std::uint32_t word, unsigned a,
                            double variance);
double closed_form_second_gradient(const state_space& space, std::uint32_t word, unsigned a,
                                   unsigned b, double variance);

struct exhaustive_moments {
    double mean = 0.0;
    double variance = 0.0;
};
exhaustive_moments exhaustive_mean_variance(const state_space& space);

// E[V_a^power] by full enumeration.
double exhaustive_wedge_moment(const state_space& space, unsigned a, int power);

// The three bound-proof sums evaluated by state enumeration:
//   b2 = sum_{a,b,c} h_a h_b h_c E[Delta_ca Delta_cb]
//   b3 = sum_a h_a E[V_a^4]
//   b5 = sum_{a,b} h_a h_b E[Delta_ab]
struct exhaustive_btilde_values {
    double b2 = 0.0;
    double b3 = 0.0;
    double b5 = 0.0;
};
exhaustive_btilde_values exhaustive_btilde(const state_space& space);

// The five sums of the normal-approximation bound for F_n, with every
// expectation taken over the exact state distribution. Requires n <= 5
// (the triple sums touch m^3 pairs of gradient tables).
std::array<double, 5> exact_Bk(const hetero_vector& mu);

struct oracle_check {
    std::string name;
    bool pass = false;
    double max_deviation = 0.0;
};

struct oracle_report {
    std::size_t n = 0;
    unsigned trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t states_enumerated = 0;
    std::vector<oracle_check> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Randomized oracle suite: exact-moment identities, gradient closed forms,
// bound-sum closed forms, and the normalization contract, all against
// exhaustive enumeration.
oracle_report run_oracle_checks(std::size_t n, unsigned trials, std::uint64_t seed);

} // namespace betatri
