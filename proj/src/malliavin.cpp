#include "betatri/malliavin.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "betatri/bounds.hpp"
#include "betatri/errors.hpp"
#include "betatri/moments.hpp"

namespace betatri {

namespace {

struct kahan_sum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace

state_space::state_space(const hetero_vector& mu) : n_(mu.size()) {
    const std::uint64_t m = total_edges(n_);
    if (m > kMaxEdgeBits)
        throw resource_error("state space needs 2^m tables; m = " + std::to_string(m) +
                             " exceeds the cap of " + std::to_string(kMaxEdgeBits));
    m_ = static_cast<unsigned>(m);
    edges_.reserve(m_);
    p_.reserve(m_);
    for (std::uint32_t i = 0; i + 1 < n_; ++i)
        for (std::uint32_t j = i + 1; j < n_; ++j) {
            edges_.push_back({i, j});
            const double prod = mu[i] * mu[j];
            p_.push_back(prod / (1.0 + prod));
        }

    prob_.resize(state_count());
    for (std::uint32_t word = 0; word < state_count(); ++word) {
        double pr = 1.0;
        for (unsigned a = 0; a < m_; ++a) pr *= edge_present(word, a) ? p_[a] : 1.0 - p_[a];
        prob_[word] = pr;
    }
}

bool state_space::has_edge(std::uint32_t word, std::uint32_t i, std::uint32_t j) const {
    if (i == j) return false;
    if (i > j) std::swap(i, j);
    return edge_present(word, static_cast<unsigned>(edge_index(n_, i, j)));
}

double state_space::expectation(std::span<const double> table) const {
    kahan_sum acc;
    for (std::uint32_t word = 0; word < state_count(); ++word)
        acc.add(prob_[word] * table[word]);
    return acc.sum;
}

std::vector<double> state_space::triangle_table() const {
    std::vector<double> t(state_count(), 0.0);
    for (std::uint32_t word = 0; word < state_count(); ++word) {
        std::uint32_t count = 0;
        for (std::uint32_t i = 0; i + 2 < n_; ++i)
            for (std::uint32_t j = i + 1; j + 1 < n_; ++j) {
                if (!has_edge(word, i, j)) continue;
                for (std::uint32_t k = j + 1; k < n_; ++k)
                    if (has_edge(word, j, k) && has_edge(word, k, i)) ++count;
            }
        t[word] = count;
    }
    return t;
}

std::uint32_t state_space::wedge_count(std::uint32_t word, unsigned a) const {
    const auto [i, j] = edges_[a];
    std::uint32_t v = 0;
    for (std::uint32_t k = 0; k < n_; ++k)
        if (k != i && k != j && has_edge(word, i, k) && has_edge(word, j, k)) ++v;
    return v;
}

int state_space::indicator_edge(unsigned a, unsigned b) const {
    if (a == b) return -1;
    const auto [ia, ja] = edges_[a];
    const auto [ib, jb] = edges_[b];
    // shared vertex, if any
    std::uint32_t shared = 0, la = 0, lb = 0;
    if (ia == ib) { shared = ia; la = ja; lb = jb; }
    else if (ia == jb) { shared = ia; la = ja; lb = ib; }
    else if (ja == ib) { shared = ja; la = ia; lb = jb; }
    else if (ja == jb) { shared = ja; la = ia; lb = ib; }
    else return -1; // disjoint
    (void)shared;
    if (la > lb) std::swap(la, lb);
    return static_cast<int>(edge_index(n_, la, lb));
}

double state_space::delta(std::uint32_t word, unsigned a, unsigned b) const {
    const int e = indicator_edge(a, b);
    if (e < 0) return 0.0;
    return edge_present(word, static_cast<unsigned>(e)) ? 1.0 : 0.0;
}

std::vector<double> brute_gradient(const state_space& space, std::span<const double> table,
                                   unsigned a) {
    const double scale = std::sqrt(space.p(a) * (1.0 - space.p(a)));
    const std::uint32_t bit = std::uint32_t{1} << a;
    std::vector<double> grad(space.state_count());
    for (std::uint32_t word = 0; word < space.state_count(); ++word)
        grad[word] = scale * (table[word | bit] - table[word & ~bit]);
    return grad;
}

double closed_form_gradient(const state_space& space, std::uint32_t word, unsigned a,
                            double variance) {
    if (!(variance > 0.0)) throw std::domain_error("gradient closed form needs positive variance");
    return std::sqrt(space.h(a)) * static_cast<double>(space.wedge_count(word, a)) /
           std::sqrt(variance);
}

double closed_form_second_gradient(const state_space& space, std::uint32_t word, unsigned a,
                                   unsigned b, double variance) {
    if (!(variance > 0.0)) throw std::domain_error("gradient closed form needs positive variance");
    return std::sqrt(space.h(a) * space.h(b)) * space.delta(word, a, b) / std::sqrt(variance);
}

exhaustive_moments exhaustive_mean_variance(const state_space& space) {
    const auto t = space.triangle_table();
    std::vector<double> t2(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) t2[i] = t[i] * t[i];
    exhaustive_moments out;
    out.mean = space.expectation(t);
    out.variance = space.expectation(t2) - out.mean * out.mean;
    return out;
}

double exhaustive_wedge_moment(const state_space& space, unsigned a, int power) {
    std::vector<double> table(space.state_count());
    for (std::uint32_t word = 0; word < space.state_count(); ++word)
        table[word] = std::pow(static_cast<double>(space.wedge_count(word, a)), power);
    return space.expectation(table);
}

exhaustive_btilde_values exhaustive_btilde(const state_space& space) {
    const unsigned m = space.edge_count();
    const std::uint32_t states = space.state_count();

    // Delta tables for every ordered edge pair with a live indicator.
    std::vector<std::vector<double>> delta_table(static_cast<std::size_t>(m) * m);
    for (unsigned a = 0; a < m; ++a)
        for (unsigned b = 0; b < m; ++b) {
            if (space.indicator_edge(a, b) < 0) continue;
            auto& tab = delta_table[a * m + b];
            tab.resize(states);
            for (std::uint32_t word = 0; word < states; ++word)
                tab[word] = space.delta(word, a, b);
        }

    exhaustive_btilde_values out;
    std::vector<double> product(states);
    for (unsigned a = 0; a < m; ++a) {
        // b3: E[V_a^4]
        out.b3 += space.h(a) * exhaustive_wedge_moment(space, a, 4);
        for (unsigned b = 0; b < m; ++b) {
            const auto& dab = delta_table[a * m + b];
            if (!dab.empty()) out.b5 += space.h(a) * space.h(b) * space.expectation(dab);
            for (unsigned c = 0; c < m; ++c) {
                const auto& dca = delta_table[c * m + a];
                const auto& dcb = delta_table[c * m + b];
                if (dca.empty() || dcb.empty()) continue;
                for (std::uint32_t word = 0; word < states; ++word)
                    product[word] = dca[word] * dcb[word];
                out.b2 += space.h(a) * space.h(b) * space.h(c) * space.expectation(product);
            }
        }
    }
    return out;
}

std::array<double, 5> exact_Bk(const hetero_vector& mu) {
    if (mu.size() > 5)
        throw resource_error("exact_Bk enumerates m^3 gradient pairs; capped at n <= 5");
    if (mu.size() < 3)
        throw std::domain_error("exact_Bk needs n >= 3 (no triangle variance below that)");
    const state_space space(mu);
    const unsigned m = space.edge_count();
    const std::uint32_t states = space.state_count();

    // Exact centering and scaling for F_n; the normalization contract
    // needs the true moments, not the asymptotic ones.
    const double mean = exact_mean(mu);
    const double var = exact_variance(mu);
    const auto triangles = space.triangle_table();
    std::vector<double> f(states);
    const double sd = std::sqrt(var);
    for (std::uint32_t word = 0; word < states; ++word) f[word] = (triangles[word] - mean) / sd;

    // First- and second-order gradient tables.
    std::vector<std::vector<double>> d(m);
    for (unsigned a = 0; a < m; ++a) d[a] = brute_gradient(space, f, a);
    std::vector<std::vector<double>> dab(static_cast<std::size_t>(m) * m);
    for (unsigned a = 0; a < m; ++a)
        for (unsigned b = 0; b < m; ++b) dab[a * m + b] = brute_gradient(space, d[b], a);

    auto expect_product_sq = [&](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> table(states);
        for (std::uint32_t word = 0; word < states; ++word)
            table[word] = x[word] * x[word] * y[word] * y[word];
        return space.expectation(table);
    };

    // E[D_a^2 D_b^2], E[D_a^4] = diagonal, E[D_ab^4], E[D_ca^2 D_cb^2].
    std::vector<double> e_ab(static_cast<std::size_t>(m) * m);
    std::vector<double> e_dab4(static_cast<std::size_t>(m) * m);
    for (unsigned a = 0; a < m; ++a)
        for (unsigned b = 0; b < m; ++b) {
            e_ab[a * m + b] = expect_product_sq(d[a], d[b]);
            e_dab4[a * m + b] = expect_product_sq(dab[a * m + b], dab[a * m + b]);
        }

    std::array<double, 5> bk{};
    for (unsigned a = 0; a < m; ++a) {
        const double ha = space.h(a);
        bk[2] += e_ab[a * m + a] / ha; // B3: E[D_a^4] = E[D_a^2 D_a^2]
        for (unsigned b = 0; b < m; ++b) {
            const double hb = space.h(b);
            bk[3] += std::sqrt(e_ab[a * m + a] * e_dab4[a * m + b]) / ha;
            bk[4] += e_dab4[a * m + b] / (ha * hb);
            for (unsigned c = 0; c < m; ++c) {
                const double e_c = expect_product_sq(dab[c * m + a], dab[c * m + b]);
                bk[0] += std::sqrt(e_ab[a * m + b] * e_c);
                bk[1] += e_c / space.h(c);
            }
        }
    }
    return bk;
}

oracle_report run_oracle_checks(std::size_t n, unsigned trials, std::uint64_t seed) {
    if (n < 3) throw std::domain_error("oracle checks need n >= 3");
    oracle_report report;
    report.n = n;
    report.trials = trials;
    report.seed = seed;

    oracle_check probability{"state_probabilities_sum_to_one", true, 0.0};
    oracle_check moments{"exact_moments_match_enumeration", true, 0.0};
    oracle_check gradient{"gradient_closed_form", true, 0.0};
    oracle_check second{"second_gradient_closed_form", true, 0.0};
    // brute D_a(D_b F) vs D_b(D_a F): equal up to summation-order rounding
    oracle_check commutation{"second_gradient_commutation", true, 0.0};
    oracle_check symmetry{"closed_form_symmetry", true, 0.0};
    oracle_check btilde{"btilde_closed_forms", true, 0.0};
    oracle_check bk_check{"bk_scaling_vs_btilde", true, 0.0};
    oracle_check normalized{"normalized_count_standardized", true, 0.0};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_mu(std::log(0.05), std::log(2.0));

    const bool bk_feasible = n <= 5;
    for (unsigned trial = 0; trial < trials; ++trial) {
        std::vector<double> entries(n);
        for (auto& e : entries) e = std::exp(log_mu(rng));
        const hetero_vector mu{std::move(entries)};
        const state_space space(mu);
        report.states_enumerated += space.state_count();

        const std::vector<double> ones(space.state_count(), 1.0);
        probability.max_deviation =
            std::max(probability.max_deviation, std::abs(space.expectation(ones) - 1.0));

        const double mean = exact_mean(mu);
        const double var = exact_variance(mu);
        const auto exh = exhaustive_mean_variance(space);
        moments.max_deviation = std::max(
            {moments.max_deviation, std::abs(mean - exh.mean) / exh.mean,
             std::abs(var - exh.variance) / exh.variance});

        const auto triangles = space.triangle_table();
        std::vector<double> f(space.state_count());
        for (std::uint32_t w = 0; w < space.state_count(); ++w)
            f[w] = (triangles[w] - mean) / std::sqrt(var);

        std::vector<double> fsq(space.state_count());
        for (std::uint32_t w = 0; w < space.state_count(); ++w) fsq[w] = f[w] * f[w];
        normalized.max_deviation =
            std::max({normalized.max_deviation, std::abs(space.expectation(f)),
                      std::abs(space.expectation(fsq) - 1.0)});

        const unsigned m = space.edge_count();
        std::vector<std::vector<double>> d(m);
        for (unsigned a = 0; a < m; ++a) {
            d[a] = brute_gradient(space, f, a);
            for (std::uint32_t w = 0; w < space.state_count(); ++w)
                gradient.max_deviation =
                    std::max(gradient.max_deviation,
                             std::abs(d[a][w] - closed_form_gradient(space, w, a, var)));
        }
        for (unsigned a = 0; a < m; ++a)
            for (unsigned b = 0; b < m; ++b) {
                const auto dab = brute_gradient(space, d[b], a);
                const auto dba = brute_gradient(space, d[a], b);
                for (std::uint32_t w = 0; w < space.state_count(); ++w) {
                    const double closed = closed_form_second_gradient(space, w, a, b, var);
                    second.max_deviation =
                        std::max(second.max_deviation, std::abs(dab[w] - closed));
                    commutation.max_deviation =
                        std::max(commutation.max_deviation, std::abs(dab[w] - dba[w]));
                    symmetry.max_deviation = std::max(
                        symmetry.max_deviation,
                        std::abs(closed - closed_form_second_gradient(space, w, b, a, var)));
                }
            }

        const auto exh_bt = exhaustive_btilde(space);
        const auto closed_bt = btilde_terms(mu);
        btilde.max_deviation =
            std::max({btilde.max_deviation, std::abs(closed_bt.b2() - exh_bt.b2) / exh_bt.b2,
                      std::abs(closed_bt.b3 - exh_bt.b3) / exh_bt.b3,
                      std::abs(closed_bt.b5 - exh_bt.b5) / exh_bt.b5});

        if (bk_feasible) {
            const auto bk = exact_Bk(mu);
            // B2, B3, B5 equal the btilde sums divided by Var^2.
            const double var_sq = var * var;
            bk_check.max_deviation = std::max(
                {bk_check.max_deviation, std::abs(bk[1] - exh_bt.b2 / var_sq) / (exh_bt.b2 / var_sq),
                 std::abs(bk[2] - exh_bt.b3 / var_sq) / (exh_bt.b3 / var_sq),
                 std::abs(bk[4] - exh_bt.b5 / var_sq) / (exh_bt.b5 / var_sq)});
        }
    }

    probability.pass = probability.max_deviation <= 1e-12;
    moments.pass = moments.max_deviation <= 1e-10;
    gradient.pass = gradient.max_deviation <= 1e-10;
    second.pass = second.max_deviation <= 1e-10;
    commutation.pass = commutation.max_deviation <= 1e-12;
    symmetry.pass = symmetry.max_deviation == 0.0;
    btilde.pass = btilde.max_deviation <= 1e-9;
    bk_check.pass = !bk_feasible || bk_check.max_deviation <= 1e-9;
    normalized.pass = normalized.max_deviation <= 1e-10;

    report.checks = {probability, moments,  gradient, second,  commutation,
                     symmetry,    btilde,   bk_check, normalized};
    return report;
}

} // namespace betatri
