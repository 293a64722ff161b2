#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace betatri {

// Potential edges are indexed 0..m-1 in lexicographic order of their
// endpoints (i, j), i < j, with m = n(n-1)/2.
struct edge_endpoints {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
};

std::uint64_t total_edges(std::size_t n);
std::uint64_t edge_index(std::size_t n, std::uint32_t i, std::uint32_t j);
edge_endpoints endpoints_of(std::size_t n, std::uint64_t edge);

// Simple undirected graph, immutable after construction. Neighbor lists are
// kept sorted ascending; for small n a packed bit matrix is kept as well so
// the enumeration and matrix counters have O(1) edge tests.
class graph_sample {
public:
    static constexpr std::size_t kBitRowsMaxN = 4096;

    // Edges may arrive in any order and orientation; duplicates are invalid.
    graph_sample(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                 std::uint64_t seed = 0);

    std::size_t vertex_count() const noexcept { return n_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t edge_count() const noexcept { return edge_count_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
        return adjacency_[v];
    }
    bool has_edge(std::uint32_t i, std::uint32_t j) const noexcept;
    bool has_bit_rows() const noexcept { return !bits_.empty(); }

    // All present edges as (i, j) with i < j, lexicographic.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

private:
    std::size_t n_ = 0;
    std::uint64_t seed_ = 0;
    std::uint64_t edge_count_ = 0;
    std::vector<std::vector<std::uint32_t>> adjacency_;
    std::vector<std::uint64_t> bits_; // row-major packed adjacency, empty for large n
    std::size_t words_per_row_ = 0;

    friend std::uint64_t count_triangles_enum(const graph_sample&);
};

// Exact triangle count by three independent algorithms. They must agree on
// every graph; the cross-check is the verification strategy.
std::uint64_t count_triangles_enum(const graph_sample& g);   // i<j<k triple loop
std::uint64_t count_triangles_matrix(const graph_sample& g); // tr(A^3)/6, integer product
std::uint64_t count_triangles_wedge(const graph_sample& g);  // sorted-list intersection

// Number of common neighbors of the endpoints of the given potential edge,
// i.e. the wedge count V_a. Does not depend on whether the edge itself is
// present.
std::uint64_t wedge_count(const graph_sample& g, std::uint64_t edge);

// Edge-list dump, "i j" per line, 0-based, i < j.
void write_edge_list(std::ostream& os, const graph_sample& g);

} // namespace betatri
