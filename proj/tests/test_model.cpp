#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "betatri/model.hpp"
#include "betatri/rng.hpp"
#include "betatri/vecnorm.hpp"

using namespace betatri;

TEST_CASE("edge probability fixed values") {
    CHECK(edge_probability(1.0, 1.0) == 0.5);
    CHECK(edge_probability(0.1, 0.2) == doctest::Approx(0.02 / 1.02).epsilon(1e-15));
    CHECK_THROWS_AS(edge_probability(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(edge_probability(1.0, 0.0), std::domain_error);

    // strictly inside (0,1), increasing in each argument
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> log_mu(std::log(1e-6), std::log(1e6));
    for (int t = 0; t < 1000; ++t) {
        const double a = std::exp(log_mu(rng));
        const double b = std::exp(log_mu(rng));
        const double p = edge_probability(a, b);
        CHECK(p > 0.0);
        CHECK(p < 1.0);
        CHECK(edge_probability(a * 1.5, b) > p);
        CHECK(edge_probability(a, b * 1.5) > p);
    }
}

TEST_CASE("mu from beta") {
    const auto unit = mu_from_beta(std::vector<double>{0.0, 0.0});
    CHECK(unit[0] == 1.0);
    CHECK(unit[1] == 1.0);
    CHECK(edge_probability(unit[0], unit[1]) == 0.5);

    const auto known = mu_from_beta(std::vector<double>{std::log(2.0), std::log(3.0)});
    CHECK(known[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(known[1] == doctest::Approx(3.0).epsilon(1e-15));

    const auto negative = mu_from_beta(std::vector<double>{-1.0, -1.0, -1.0});
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(negative[i] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

    CHECK_THROWS_AS(mu_from_beta(std::vector<double>{800.0, 0.0}), std::range_error);
    CHECK_THROWS_AS(mu_from_beta(std::vector<double>{-800.0, 0.0}), std::range_error);

    // logistic form agreement: p computed from mu matches the beta form
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> beta_dist(-6.0, 6.0);
    for (int t = 0; t < 500; ++t) {
        const double bi = beta_dist(rng), bj = beta_dist(rng);
        const auto mu = mu_from_beta(std::vector<double>{bi, bj});
        const double logistic = std::exp(bi + bj) / (1.0 + std::exp(bi + bj));
        CHECK(edge_probability(mu[0], mu[1]) == doctest::Approx(logistic).epsilon(1e-14));
    }
}

TEST_CASE("block design validation") {
    CHECK_THROWS_AS(block_design(2, {0.6, 0.6}, {1.0, 2.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(block_design(2, {0.5, 0.5}, {1.0, -2.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(block_design(2, {0.5, 0.5}, {1.0, 2.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(block_design(2, {0.5, 0.5}, {1.0, 2.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(block_design(2, {1.0}, {1.0, 2.0}, 0.5), std::domain_error);
}

TEST_CASE("block mu materialization") {
    const block_design single(1, {1.0}, {1.0}, 0.5);
    const auto flat = block_mu(single, 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(flat[i] == doctest::Approx(std::pow(4.0, -0.25)).epsilon(1e-15));

    const block_design two(2, {0.5, 0.5}, {1.0, 2.0}, 0.5);
    const auto split = block_mu(two, 4);
    CHECK(split[0] == doctest::Approx(std::pow(4.0, -0.25)));
    CHECK(split[1] == doctest::Approx(std::pow(4.0, -0.25)));
    CHECK(split[2] == doctest::Approx(2.0 * std::pow(4.0, -0.25)));
    CHECK(split[3] == doctest::Approx(2.0 * std::pow(4.0, -0.25)));

    // n = K forces one vertex per block
    const block_design three(3, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0, 2.0, 3.0}, 0.4);
    const auto forced = block_mu(three, 3);
    const double scale = std::pow(3.0, -0.2);
    CHECK(forced[0] == doctest::Approx(scale));
    CHECK(forced[1] == doctest::Approx(2.0 * scale));
    CHECK(forced[2] == doctest::Approx(3.0 * scale));

    CHECK_THROWS_AS(block_mu(three, 2), std::domain_error);

    // sizes stay within 1 of pi_r * n
    const block_design uneven(3, {0.2, 0.3, 0.5}, {1.0, 1.0, 1.0}, 0.5);
    for (std::size_t n : {10, 37, 101, 1000}) {
        const auto sizes = block_sizes(uneven, n);
        std::size_t total = 0;
        for (unsigned r = 0; r < 3; ++r) {
            CHECK(std::abs(static_cast<double>(sizes[r]) - uneven.pi[r] * static_cast<double>(n)) <=
                  1.0);
            total += sizes[r];
        }
        CHECK(total == n);
    }
}

TEST_CASE("blockwise norms approach the closed form") {
    // ||mu||_s^s -> n^{1 - alpha s/2} sum_r pi_r theta_r^s
    const block_design design(2, {0.3, 0.7}, {1.0, 2.0}, 0.5);
    const std::size_t n = 10000;
    const auto mu = block_mu(design, n);
    for (double s : {2.0, 3.0}) {
        const double predicted = std::pow(static_cast<double>(n), 1.0 - design.alpha * s / 2.0) *
                                 (0.3 * 1.0 + 0.7 * std::pow(2.0, s));
        const double actual = norm_pow(mu, s);
        CHECK(std::abs(actual / predicted - 1.0) <= 0.02);
    }
}

TEST_CASE("condition diagnostics") {
    const hetero_vector flat{{1, 1, 1, 1}};
    const auto rep = diagnose_conditions(flat);
    CHECK(rep.mu_max == 1.0);
    CHECK(rep.l2_norm == 2.0);
    CHECK(rep.l32_ratio == doctest::Approx(4.0 / 64.0));
    CHECK(rep.ratio_cond == doctest::Approx(1.0 / std::pow(2.0, 1.5)));

    const block_design two(2, {0.5, 0.5}, {1.0, 2.0}, 0.5);
    const auto block_rep = diagnose_conditions(block_mu(two, 100));
    CHECK(minmax_ratio(block_mu(two, 100)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(block_rep.ratio_cond > 0.0);
}

TEST_CASE("sampling determinism and edge-probability extremes") {
    const model_spec tiny(hetero_vector{std::vector<double>(8, 1e-6)});
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        CHECK(sample_graph(tiny, seed).edge_count() == 0);

    const model_spec dense(hetero_vector{{1e6, 1e6}});
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        CHECK(sample_graph(dense, seed).edge_count() == 1);

    const block_design design(2, {0.5, 0.5}, {1.0, 2.0}, 0.4);
    const model_spec spec(block_mu(design, 60));
    const auto g1 = sample_graph(spec, 42);
    const auto g2 = sample_graph(spec, 42);
    CHECK(g1.edges() == g2.edges());
    CHECK(sample_graph(spec, 43).edges() != g1.edges());
}

TEST_CASE("empirical edge frequency matches p_ij") {
    const hetero_vector mu{{0.8, 0.5, 1.2}};
    const model_spec spec(mu);
    const double p01 = edge_probability(0.8, 0.5);
    const std::size_t r = 100000;
    std::size_t hits = 0;
    for (std::size_t rep = 0; rep < r; ++rep)
        if (edge_uniform(derive_seed(99, 3, rep), 0, 1) < p01) ++hits;
    const double freq = static_cast<double>(hits) / static_cast<double>(r);
    const double band = 4.0 * std::sqrt(p01 * (1.0 - p01) / static_cast<double>(r));
    CHECK(std::abs(freq - p01) <= band);
}

TEST_CASE("homogeneous beta reduces to a single edge probability") {
    const double beta = -0.7;
    const auto mu = mu_from_beta(std::vector<double>(5, beta));
    const double expected = std::exp(2.0 * beta) / (1.0 + std::exp(2.0 * beta));
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j)
            CHECK(edge_probability(mu[i], mu[j]) == doctest::Approx(expected).epsilon(1e-14));

    // beta = 0 is exact
    const auto unit = mu_from_beta(std::vector<double>(4, 0.0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            CHECK(edge_probability(unit[i], unit[j]) == 0.5);
}

TEST_CASE("random stream is a frozen contract") {
    // sampled graphs and replicate seeds must be reproducible across
    // releases, so the key chain itself is pinned; splitmix64(0) is the
    // reference test vector of the generator
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(1) == 0x910a2dec89025cc1ULL);
    CHECK(edge_key(42, 0, 1) == 0xf4269628263f4c12ULL);
    CHECK(derive_seed(7, 100, 3) == 0x6bf963c3b0f5ff8eULL);
    CHECK(edge_uniform(9, 2, 5) == 0.56066304099451081);

    // distinct keys decorrelate: flipping any component changes the draw
    CHECK(edge_key(42, 0, 1) != edge_key(43, 0, 1));
    CHECK(edge_key(42, 0, 1) != edge_key(42, 0, 2));
    CHECK(derive_seed(7, 100, 3) != derive_seed(7, 101, 3));
    CHECK(derive_seed(7, 100, 3) != derive_seed(7, 100, 4));
}

TEST_CASE("mu file parsing") {
    CHECK(parse_mu_text("1.0\n2.0\n", "test").entries() == std::vector<double>{1.0, 2.0});
    CHECK(parse_mu_text("[0.5, 0.5, 0.5]", "test").size() == 3);
    CHECK(parse_mu_text(" 0.25 \n\n 0.75\n", "test").size() == 2);

    CHECK_THROWS_WITH_AS(parse_mu_text("-1\n1.0\n", "mu.txt"),
                         doctest::Contains("mu.txt:1"), std::domain_error);
    CHECK_THROWS_WITH_AS(parse_mu_text("1.0\nabc\n", "mu.txt"),
                         doctest::Contains("mu.txt:2"), std::domain_error);
    CHECK_THROWS_AS(parse_mu_text("", "empty"), std::domain_error);
    CHECK_THROWS_AS(parse_mu_text("[1.0, -2.0]", "bad.json"), std::domain_error);
    CHECK_THROWS_AS(load_mu_file("/nonexistent/mu.txt"), std::domain_error);
}
