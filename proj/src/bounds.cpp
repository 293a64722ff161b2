#include "betatri/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "betatri/errors.hpp"
#include "betatri/moments.hpp"

namespace betatri {

std::array<double, 5> a_terms(const hetero_vector& mu) {
    auto nrm = [&mu](double s) { return norm(mu, s); };
    std::array<double, 5> a{};
    a[0] = std::pow(nrm(1.5), 0.75) * std::pow(nrm(2.5), 1.25);
    a[1] = std::pow(nrm(1.5), 0.75) * std::pow(nrm(2.0), 0.5) * std::pow(nrm(3.5), 1.75) *
           std::pow(nrm(4.0), 2.0);
    a[2] = std::pow(nrm(2.0), 2.5) * std::pow(nrm(5.0), 5.0);
    a[3] = std::pow(nrm(2.0), 1.5) * std::pow(nrm(2.5), 2.5) * std::pow(nrm(5.0), 2.5);
    a[4] = std::pow(nrm(1.75), 1.75) * std::pow(nrm(3.5), 1.75);
    return a;
}

double bound_denominator(const hetero_vector& mu) {
    const double l2 = norm(mu, 2.0);
    const double l3 = norm(mu, 3.0);
    return std::pow(l2, 2.5) * (std::pow(l3, 6.0) + l2 * l2);
}

double kolmogorov_rate(const hetero_vector& mu) {
    const auto a = a_terms(mu);
    double sum = 0.0;
    for (double v : a) sum += v;
    return sum / bound_denominator(mu);
}

double eta(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("eta is defined on (0, 1), got " + std::to_string(alpha));
    if (alpha <= 0.5) return 1.0 - alpha;
    if (alpha <= 2.0 / 3.0) return 0.75 - 0.5 * alpha;
    return 1.25 - 1.25 * alpha;
}

btilde_values btilde_terms(const hetero_vector& mu, const btilde_options& opts) {
    const std::size_t n = mu.size();
    if (n > opts.max_n)
        throw resource_error("btilde sums are O(n^4); n = " + std::to_string(n) +
                             " exceeds the cap " + std::to_string(opts.max_n));

    // Dense probability tables; n is capped so n^2 storage is trivial.
    std::vector<double> p(n * n, 0.0), h(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double prod = mu[i] * mu[j];
            const double pij = prod / (1.0 + prod);
            p[i * n + j] = pij;
            h[i * n + j] = pij * (1.0 - pij);
        }
    auto P = [&](std::size_t i, std::size_t j) { return p[i * n + j]; };
    auto H = [&](std::size_t i, std::size_t j) { return h[i * n + j]; };

    btilde_values out;

    // b5 = sum over ordered distinct (i,j,k) of h_ij h_ik p_jk: ordered pairs
    // of distinct edges sharing vertex i, weighted by the closing edge.
    // b21 is the identical-edge part of b2, with h_ij squared.
    // b3 = sum_a h_a E[V_a^4]; the wedge count over edge (i,j) is a sum of
    // independent Bernoulli(p_ik p_jk) variables.
    std::vector<double> rates;
    rates.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double b5_ij = 0.0, b21_ij = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                b5_ij += H(i, k) * P(j, k);
                b21_ij += H(i, k) * P(j, k);
            }
            out.b5 += H(i, j) * b5_ij;
            out.b21 += H(i, j) * H(i, j) * b21_ij;

            if (j > i) {
                rates.clear();
                for (std::size_t k = 0; k < n; ++k)
                    if (k != i && k != j) rates.push_back(P(i, k) * P(j, k));
                const auto m = poisson_binomial_moments(rates, 4);
                out.b3 += H(i, j) * m[3];
            }
        }

    // Distinct-edge part of b2. Ordered pairs (a, b) of distinct edges, both
    // sharing a vertex with e_c; expectations factorize because the two
    // indicator edges always differ.
    //
    // Four-vertex path: e_c = {i, j}, e_a = {i, k}, e_b = {j, l}.
    // Four-vertex star: e_c = {i, j}, e_a = {i, k}, e_b = {i, l}, k != l.
    // Triangle: e_c = {i, j}, e_a = {i, k}, e_b = {j, k}.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double hc = H(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double ha = H(i, k);
                out.b22_triangle += hc * ha * H(j, k) * P(j, k) * P(i, k);
                double path = 0.0, star = 0.0;
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == i || l == j || l == k) continue;
                    path += H(j, l) * P(i, l) * P(j, k);
                    star += H(i, l) * P(j, k) * P(j, l);
                }
                out.b22_path += hc * ha * path;
                out.b22_star += hc * ha * star;
            }
        }
    return out;
}

bound_report compute_bound_report(const hetero_vector& mu, bool with_btilde,
                                  std::optional<double> alpha, const btilde_options& opts) {
    bound_report rep;
    rep.a = a_terms(mu);
    rep.denominator = bound_denominator(mu);
    double sum = 0.0;
    for (double v : rep.a) sum += v;
    rep.rate_with_unit_constant = sum / rep.denominator;
    if (with_btilde) rep.btilde = btilde_terms(mu, opts);
    if (alpha) rep.eta_value = eta(*alpha);
    return rep;
}

} // namespace betatri
