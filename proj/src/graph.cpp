#include "betatri/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace betatri {

std::uint64_t total_edges(std::size_t n) {
    return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

std::uint64_t edge_index(std::size_t n, std::uint32_t i, std::uint32_t j) {
    if (i >= j || j >= n) throw std::domain_error("edge_index requires i < j < n");
    const std::uint64_t row_offset =
        static_cast<std::uint64_t>(i) * (n - 1) - static_cast<std::uint64_t>(i) * (i - 1) / 2;
    return row_offset + (j - i - 1);
}

edge_endpoints endpoints_of(std::size_t n, std::uint64_t edge) {
    if (edge >= total_edges(n)) throw std::domain_error("edge index out of range");
    // First endpoint: largest i with offset(i) <= edge. Start from the float
    // estimate and correct by at most one step.
    const double nd = static_cast<double>(n);
    double guess = nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * static_cast<double>(edge));
    std::uint64_t i = guess <= 0.0 ? 0 : static_cast<std::uint64_t>(guess);
    if (i >= n - 1) i = n - 2;
    auto offset = [n](std::uint64_t k) {
        return k * (n - 1) - k * (k - 1) / 2;
    };
    while (i > 0 && offset(i) > edge) --i;
    while (offset(i + 1) <= edge && i + 1 < n - 1) ++i;
    const std::uint64_t j = edge - offset(i) + i + 1;
    return {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
}

graph_sample::graph_sample(std::size_t n,
                           const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                           std::uint64_t seed)
    : n_(n), seed_(seed), adjacency_(n) {
    if (n < 2) throw std::domain_error("graph needs at least 2 vertices");
    for (auto [a, b] : edges) {
        if (a == b || a >= n || b >= n)
            throw std::domain_error("invalid edge (" + std::to_string(a) + ", " +
                                    std::to_string(b) + ")");
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end())
            throw std::domain_error("duplicate edge in input");
    }
    edge_count_ = edges.size();

    if (n <= kBitRowsMaxN) {
        words_per_row_ = (n + 63) / 64;
        bits_.assign(words_per_row_ * n, 0);
        for (auto [a, b] : edges) {
            bits_[a * words_per_row_ + b / 64] |= std::uint64_t{1} << (b % 64);
            bits_[b * words_per_row_ + a / 64] |= std::uint64_t{1} << (a % 64);
        }
    }
}

bool graph_sample::has_edge(std::uint32_t i, std::uint32_t j) const noexcept {
    if (i == j) return false;
    if (!bits_.empty())
        return (bits_[i * words_per_row_ + j / 64] >> (j % 64)) & 1;
    const auto& list = adjacency_[i];
    return std::binary_search(list.begin(), list.end(), j);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> graph_sample::edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(edge_count_);
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j : adjacency_[i])
            if (j > i) out.emplace_back(i, j);
    return out;
}

std::uint64_t count_triangles_enum(const graph_sample& g) {
    const std::size_t n = g.vertex_count();
    std::uint64_t total = 0;
    for (std::uint32_t i = 0; i + 2 < n; ++i)
        for (std::uint32_t j = i + 1; j + 1 < n; ++j) {
            if (!g.has_edge(i, j)) continue;
            for (std::uint32_t k = j + 1; k < n; ++k)
                if (g.has_edge(j, k) && g.has_edge(k, i)) ++total;
        }
    return total;
}

std::uint64_t count_triangles_matrix(const graph_sample& g) {
    const std::size_t n = g.vertex_count();
    // A as dense 0/1 rows, B = A*A with 32-bit entries (max n-2 < 2^32),
    // then tr(A^3) = sum_{ij} A_ij B_ij.
    std::vector<std::uint8_t> a(n * n, 0);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j : g.neighbors(i)) a[i * n + j] = 1;

    std::vector<std::uint32_t> b(n, 0);
    std::uint64_t trace = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(b.begin(), b.end(), 0);
        // row i of B: sum over k of A_ik * row_k
        for (std::uint32_t k : g.neighbors(static_cast<std::uint32_t>(i))) {
            const std::uint8_t* row_k = &a[static_cast<std::size_t>(k) * n];
            for (std::size_t j = 0; j < n; ++j) b[j] += row_k[j];
        }
        const std::uint8_t* row_i = &a[i * n];
        for (std::size_t j = 0; j < n; ++j)
            if (row_i[j]) trace += b[j];
    }
    return trace / 6;
}

std::uint64_t count_triangles_wedge(const graph_sample& g) {
    const std::size_t n = g.vertex_count();
    std::uint64_t total = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
        const auto nu = g.neighbors(u);
        for (std::uint32_t v : nu) {
            if (v <= u) continue;
            const auto nv = g.neighbors(v);
            // count w > v common to both sorted lists
            auto iu = std::lower_bound(nu.begin(), nu.end(), v + 1);
            auto iv = std::lower_bound(nv.begin(), nv.end(), v + 1);
            while (iu != nu.end() && iv != nv.end()) {
                if (*iu < *iv) ++iu;
                else if (*iv < *iu) ++iv;
                else { ++total; ++iu; ++iv; }
            }
        }
    }
    return total;
}

std::uint64_t wedge_count(const graph_sample& g, std::uint64_t edge) {
    const auto [i, j] = endpoints_of(g.vertex_count(), edge);
    const auto ni = g.neighbors(i);
    const auto nj = g.neighbors(j);
    std::uint64_t common = 0;
    auto a = ni.begin();
    auto b = nj.begin();
    while (a != ni.end() && b != nj.end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else { ++common; ++a; ++b; }
    }
    return common;
}

void write_edge_list(std::ostream& os, const graph_sample& g) {
    for (auto [i, j] : g.edges()) os << i << ' ' << j << '\n';
}

} // namespace betatri
