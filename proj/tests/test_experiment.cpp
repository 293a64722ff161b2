#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "betatri/experiment.hpp"
#include "betatri/serialize.hpp"

using namespace betatri;

namespace {

experiment_config design_config(block_design design, std::vector<std::size_t> sizes,
                                std::size_t replicates, std::uint64_t seed,
                                unsigned threads = 1) {
    experiment_config cfg;
    cfg.design = std::move(design);
    cfg.n_list = std::move(sizes);
    cfg.replicates = replicates;
    cfg.master_seed = seed;
    cfg.threads = threads;
    return cfg;
}

// Inverse standard normal CDF by bisection; test-side oracle only.
double normal_quantile(double p) {
    double lo = -10.0, hi = 10.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (std_normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("standard normal cdf reference points") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-7));
    CHECK(std::abs(std_normal_cdf(1.0) - 0.841344746068543) <= 1e-12);
    CHECK(std::abs(std_normal_cdf(-1.0) - 0.158655253931457) <= 1e-12);
}

TEST_CASE("empirical Kolmogorov distance fixed cases") {
    CHECK(empirical_kolmogorov(std::vector<double>{0.0}) == 0.5);
    CHECK(empirical_kolmogorov(std::vector<double>{-1.0, 1.0}) ==
          doctest::Approx(std_normal_cdf(1.0) - 0.5).epsilon(1e-12));
    CHECK_THROWS_AS(empirical_kolmogorov(std::vector<double>{}), std::domain_error);

    // exact quantiles at (i - 1/2)/R make the ECDF straddle the CDF evenly
    const std::size_t r = 1000;
    std::vector<double> quantiles(r);
    for (std::size_t i = 0; i < r; ++i)
        quantiles[i] = normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(r));
    CHECK(empirical_kolmogorov(quantiles) ==
          doctest::Approx(1.0 / (2.0 * static_cast<double>(r))).epsilon(1e-6));
}

TEST_CASE("empirical distance of true normal samples sits inside the DKW band") {
    const std::size_t r = 1000;
    const double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(r)));
    int inside = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::mt19937_64 rng(9000 + trial);
        std::normal_distribution<double> normal;
        std::vector<double> samples(r);
        for (auto& s : samples) s = normal(rng);
        if (empirical_kolmogorov(samples) < band) ++inside;
    }
    CHECK(inside >= 95);
}

TEST_CASE("replicates are deterministic in seed and config") {
    auto cfg = design_config(block_design(2, {0.5, 0.5}, {1.0, 2.0}, 0.4), {50}, 8, 99);
    const auto first = run_replicates(cfg, 50);
    const auto second = run_replicates(cfg, 50);
    CHECK(first == second);

    cfg.master_seed = 100;
    CHECK(run_replicates(cfg, 50) != first);
}

TEST_CASE("tiny parameters produce empty graphs") {
    experiment_config cfg;
    cfg.mu = hetero_vector{std::vector<double>(12, 1e-5)};
    cfg.n_list = {12};
    cfg.replicates = 100;
    cfg.master_seed = 5;
    for (std::uint64_t count : run_replicates(cfg, 12)) CHECK(count == 0);
}

TEST_CASE("replicate mean honors the exact expectation") {
    // homogeneous n = 100 at p = 1/2: E[T] = C(100,3)/8
    experiment_config cfg;
    cfg.mu = hetero_vector{std::vector<double>(100, 1.0)};
    cfg.n_list = {100};
    cfg.replicates = 10000;
    cfg.master_seed = 2718;
    const auto counts = run_replicates(cfg, 100);
    double mean = 0.0;
    for (auto c : counts) mean += static_cast<double>(c);
    mean /= static_cast<double>(counts.size());

    const double expected = 161700.0 / 8.0;
    const double sd = std::sqrt(exact_variance(*cfg.mu));
    CHECK(std::abs(mean - expected) <=
          4.0 * sd / std::sqrt(static_cast<double>(cfg.replicates)));
}

TEST_CASE("lln ratio statistics") {
    const hetero_vector mu{std::vector<double>(40, 0.5)};
    const double l2p = norm_pow(mu, 2.0);

    // degenerate sample equal to the exact mean
    const double exact = exact_mean(mu);
    const auto plug = lln_check(std::vector<std::uint64_t>(5, static_cast<std::uint64_t>(exact)),
                                mu);
    CHECK(plug.mean == doctest::Approx(6.0 * std::floor(exact) / std::pow(l2p, 3.0)));
    CHECK(plug.sd <= 1e-12 * plug.mean);

    CHECK_THROWS_AS(lln_check(std::vector<std::uint64_t>{}, mu), std::domain_error);
}

TEST_CASE("lln concentrates along a growing design") {
    const block_design design(1, {1.0}, {1.0}, 0.4);
    auto run = [&design](std::size_t n, std::size_t reps) {
        auto cfg = design_config(design, {n}, reps, 31);
        const auto counts = run_replicates(cfg, n);
        return lln_check(counts, block_mu(design, n));
    };
    const auto small = run(500, 500);
    const auto large = run(2000, 500);
    CHECK(large.mean >= 0.85);
    CHECK(large.mean <= 1.0);
    CHECK(large.sd < small.sd);
}

TEST_CASE("regression on synthetic sweeps") {
    // exact power law: slope recovered, zero residual
    std::vector<double> x, y;
    for (std::size_t n : {100, 200, 400, 800}) {
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(3.0 * std::pow(static_cast<double>(n), -0.5)));
    }
    const auto fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.stderr_slope <= 1e-12);

    // constant response: zero slope
    const std::vector<double> flat(4, std::log(0.25));
    CHECK(fit_line(x, flat).slope == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}),
                    std::domain_error);
}

TEST_CASE("config validation") {
    experiment_config cfg;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error); // neither design nor mu

    cfg.design = block_design(1, {1.0}, {1.0}, 0.5);
    cfg.replicates = 0;
    cfg.n_list = {100};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error); // no replicates

    cfg.replicates = 10;
    cfg.n_list = {200, 100};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error); // not ascending

    cfg.n_list = {100};
    cfg.mu = hetero_vector{{1.0, 2.0}};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error); // both sources

    cfg.design.reset();
    CHECK_THROWS_AS(cfg.validate(), std::domain_error); // mu size mismatch
    cfg.n_list = {2};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("experiment report is invariant to thread count") {
    const block_design design(2, {0.5, 0.5}, {1.0, 2.0}, 0.4);
    std::string reference;
    for (unsigned threads : {1u, 4u, 8u}) {
        auto cfg = design_config(design, {40, 80}, 30, 7, threads);
        const auto report = run_experiment(cfg);
        const std::string payload =
            (nlohmann::json{{"config", config_json(cfg)},
                            {"result", experiment_result_json(report)}})
                .dump();
        if (reference.empty()) reference = payload;
        else CHECK(payload == reference);
    }
}

TEST_CASE("kolmogorov distance shrinks along the sweep, up to noise") {
    const block_design design(1, {1.0}, {1.0}, 0.5);
    auto cfg = design_config(design, {100, 200, 400}, 500, 4242);
    const auto report = run_experiment(cfg);
    REQUIRE(report.entries.size() == 3);
    const double slack = 2.0 / std::sqrt(500.0);
    int inversions = 0;
    for (std::size_t k = 1; k < report.entries.size(); ++k) {
        if (report.entries[k].d_kolmogorov > report.entries[k - 1].d_kolmogorov) ++inversions;
        CHECK(report.entries[k].d_kolmogorov <=
              report.entries[k - 1].d_kolmogorov + slack);
    }
    CHECK(inversions <= 1);
    REQUIRE(report.rate.has_value());
    REQUIRE(report.eta_value.has_value());
    CHECK(*report.eta_value == 0.5);
}

TEST_CASE("experiment writes json and csv atomically") {
    const auto dir = std::filesystem::temp_directory_path() / "betatri_experiment_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    auto cfg = design_config(block_design(1, {1.0}, {1.0}, 0.5), {30}, 10, 12);
    cfg.output_stem = dir / "run";
    run_experiment(cfg);

    REQUIRE(std::filesystem::exists(dir / "run.json"));
    REQUIRE(std::filesystem::exists(dir / "run.csv"));
    CHECK(!std::filesystem::exists(dir / "run.json.tmp"));

    std::ifstream json_in(dir / "run.json");
    nlohmann::json doc = nlohmann::json::parse(json_in);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["result"]["per_n"].size() == 1);
    CHECK(doc["result"]["per_n"][0]["n"] == 30);
    CHECK(doc.contains("metadata"));

    std::ifstream csv_in(dir / "run.csv");
    std::string header;
    std::getline(csv_in, header);
    CHECK(header == "n,replicate,t_n,f_n");

    // every row's f_n is the normalization of its t_n
    const moment_report moments = doc["result"]["per_n"][0]["moments"].get<moment_report>();
    std::size_t rows = 0;
    for (std::string line; std::getline(csv_in, line);) {
        if (line.empty()) continue;
        ++rows;
        std::stringstream ss(line);
        std::string n_field, r_field, t_field, f_field;
        std::getline(ss, n_field, ',');
        std::getline(ss, r_field, ',');
        std::getline(ss, t_field, ',');
        std::getline(ss, f_field, ',');
        CHECK(std::stod(f_field) ==
              doctest::Approx(normalize(std::stod(t_field), moments)).epsilon(1e-12));
    }
    CHECK(rows == 10);
    std::filesystem::remove_all(dir);
}
