#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "betatri/model.hpp"
#include "betatri/vecnorm.hpp"

namespace betatri {

struct moment_report {
    double exact_mean = 0.0;
    double exact_var = 0.0;
    double asym_mean = 0.0;
    double asym_var = 0.0;
    double mean_ratio = 0.0; // exact / asymptotic
    double var_ratio = 0.0;
};

// Exact E[T_n] = sum_{i<j<k} p_ij p_jk p_ki.
double exact_mean(const hetero_vector& mu);

// Exact Var[T_n] through the orthogonal decomposition
//   sum_{i<j} c_ij^2 h_ij + sum_{i<j, k != i,j} p_ij^2 h_jk h_ki
//     + sum_{i<j<k} h_ij h_jk h_ki,
// with h_ij = p_ij (1 - p_ij) and c_ij = sum_{k != i,j} p_jk p_ki. The three
// terms are variances of uncorrelated groups, so the result is nonnegative
// by construction. O(n^3) via dense matrix products.
double exact_variance(const hetero_vector& mu);

// Leading-order formulas: ||mu||_2^6 / 6 and
// ||mu||_2^4 (3 ||mu||_3^6 + ||mu||_2^2) / 6. No finite-n correction.
double asymptotic_mean(const hetero_vector& mu);
double asymptotic_variance(const hetero_vector& mu);

moment_report compute_moments(const hetero_vector& mu);

// Closed-form exact moments for blockwise-constant designs; identical values
// to the generic O(n^3) path but in O(K^3) time, which makes large-n
// convergence sweeps cheap.
moment_report compute_moments(const block_design& design, std::size_t n);

// (t - mean) / sqrt(var), with exact or asymptotic moments per the flag.
double normalize(double t, const moment_report& report, bool use_exact = true);

// Raw moments E[V^k], k = 1..order, of a sum of independent Bernoulli
// variables, via cumulants: exact and O(length).
std::vector<double> poisson_binomial_moments(std::span<const double> rates, int order);

// Fourth-moment wedge diagnostic: sup over all potential edges (i, j) of
//   E[V_a^s] / (||mu||_2^2 mu_i mu_j + ||mu||_2^{2s} mu_i^s mu_j^s),
// for s in {2, 4}. The theory bounds this by a constant depending only on s.
double wedge_moment_sup_ratio(const hetero_vector& mu, int s);

} // namespace betatri
