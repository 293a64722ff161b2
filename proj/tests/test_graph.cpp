#include <doctest.h>

#include <chrono>
#include <numeric>
#include <random>
#include <sstream>

#include "betatri/graph.hpp"
#include "betatri/model.hpp"

using namespace betatri;

namespace {

graph_sample complete_graph(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return graph_sample(n, edges);
}

graph_sample sampled(const block_design& design, std::size_t n, std::uint64_t seed) {
    return sample_graph(model_spec(block_mu(design, n)), seed);
}

} // namespace

TEST_CASE("edge indexing is a lexicographic bijection") {
    for (std::size_t n : {2, 3, 5, 17, 100}) {
        std::uint64_t a = 0;
        for (std::uint32_t i = 0; i + 1 < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j, ++a) {
                CHECK(edge_index(n, i, j) == a);
                const auto e = endpoints_of(n, a);
                CHECK(e.i == i);
                CHECK(e.j == j);
            }
        CHECK(a == total_edges(n));
    }
    CHECK_THROWS_AS(endpoints_of(4, 6), std::domain_error);
    CHECK_THROWS_AS(edge_index(4, 2, 2), std::domain_error);
}

TEST_CASE("triangle counts on fixed graphs") {
    CHECK(count_triangles_enum(complete_graph(3)) == 1);
    CHECK(count_triangles_enum(complete_graph(4)) == 4);
    CHECK(count_triangles_matrix(complete_graph(5)) == 10);
    CHECK(count_triangles_enum(graph_sample(4, {})) == 0);

    // 5-cycle has girth 5
    graph_sample cycle(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    CHECK(count_triangles_matrix(cycle) == 0);
    CHECK(count_triangles_wedge(cycle) == 0);

    // path of length 2
    graph_sample path(3, {{0, 1}, {1, 2}});
    CHECK(count_triangles_wedge(path) == 0);

    // complete bipartite K_{3,3} is triangle-free
    std::vector<std::pair<std::uint32_t, std::uint32_t>> bip;
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 3; j < 6; ++j) bip.emplace_back(i, j);
    CHECK(count_triangles_wedge(graph_sample(6, bip)) == 0);
}

TEST_CASE("three counting algorithms agree on random graphs") {
    std::mt19937_64 meta(2024);
    std::uniform_int_distribution<std::size_t> size(2, 200);
    const double alphas[] = {0.2, 0.5, 0.8};
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = size(meta);
        const block_design design(1, {1.0}, {1.0 + 0.5 * (trial % 3)}, alphas[trial % 3]);
        const auto g = sampled(design, n, 7000 + trial);
        const auto enum_count = count_triangles_enum(g);
        CAPTURE(trial); CAPTURE(n);
        REQUIRE(count_triangles_matrix(g) == enum_count);
        REQUIRE(count_triangles_wedge(g) == enum_count);
    }
}

TEST_CASE("wedge counts on fixed graphs") {
    const auto k4 = complete_graph(4);
    for (std::uint64_t a = 0; a < total_edges(4); ++a) CHECK(wedge_count(k4, a) == 2);
    const graph_sample empty(5, {});
    for (std::uint64_t a = 0; a < total_edges(5); ++a) CHECK(wedge_count(empty, a) == 0);
}

TEST_CASE("wedges over present edges sum to three times the triangles") {
    const block_design design(2, {0.5, 0.5}, {1.0, 2.0}, 0.4);
    std::mt19937_64 meta(5);
    std::uniform_int_distribution<std::size_t> size(3, 80);
    for (int trial = 0; trial < 500; ++trial) {
        const auto g = sampled(design, size(meta), 11000 + trial);
        std::uint64_t wedge_sum = 0;
        for (auto [i, j] : g.edges())
            wedge_sum += wedge_count(g, edge_index(g.vertex_count(), i, j));
        CAPTURE(trial);
        REQUIRE(wedge_sum == 3 * count_triangles_enum(g));
    }
}

TEST_CASE("toggling an absent edge adds exactly its wedge count") {
    const block_design design(1, {1.0}, {1.2}, 0.3);
    std::mt19937_64 meta(77);
    std::uniform_int_distribution<std::size_t> size(3, 60);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = size(meta);
        const auto g = sampled(design, n, 13000 + trial);
        // first absent pair in lexicographic order
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
            bool done = false;
            for (std::uint32_t j = i + 1; j < n && !done; ++j) {
                if (g.has_edge(i, j)) continue;
                auto edges = g.edges();
                edges.emplace_back(i, j);
                const graph_sample toggled(n, edges);
                REQUIRE(count_triangles_enum(toggled) ==
                        count_triangles_enum(g) + wedge_count(g, edge_index(n, i, j)));
                done = true;
            }
            if (done) break;
        }
    }
}

TEST_CASE("neighbor lists are sorted and consistent with has_edge") {
    const auto g = sampled(block_design(1, {1.0}, {1.0}, 0.4), 150, 3);
    for (std::uint32_t v = 0; v < 150; ++v) {
        const auto nbrs = g.neighbors(v);
        CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
        for (std::uint32_t w : nbrs) {
            CHECK(g.has_edge(v, w));
            CHECK(g.has_edge(w, v));
        }
        CHECK(!g.has_edge(v, v));
    }
}

TEST_CASE("edge list dump") {
    graph_sample g(4, {{2, 1}, {0, 3}});
    std::ostringstream out;
    write_edge_list(out, g);
    CHECK(out.str() == "0 3\n1 2\n");
    CHECK_THROWS_AS(graph_sample(4, {{1, 1}}), std::domain_error);
    CHECK_THROWS_AS(graph_sample(4, {{0, 1}, {1, 0}}), std::domain_error);
}

TEST_CASE("wedge counting scales to sparse hundred-thousand-vertex graphs") {
    // ~n*expected_degree/2 random edges, then time only the counting pass
    const std::size_t n = 100000;
    const std::size_t target_edges = n * 10 / 2;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint32_t> vertex(0, static_cast<std::uint32_t>(n - 1));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(target_edges);
    std::vector<std::uint64_t> seen;
    seen.reserve(target_edges);
    while (edges.size() < target_edges) {
        std::uint32_t i = vertex(rng), j = vertex(rng);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        seen.push_back((static_cast<std::uint64_t>(i) << 32) | j);
        edges.emplace_back(i, j);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        // drop duplicates by rebuilding
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        edges.clear();
        for (std::uint64_t key : seen)
            edges.emplace_back(static_cast<std::uint32_t>(key >> 32),
                               static_cast<std::uint32_t>(key & 0xffffffffu));
    }
    const graph_sample g(n, edges);
    const auto start = std::chrono::steady_clock::now();
    const auto triangles = count_triangles_wedge(g);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 5.0);
    // G(n, m) with mean degree 10: expected triangle count ~ (10^3)/6 ~ 167
    CHECK(triangles < 2000u);
}
