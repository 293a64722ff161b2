#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "betatri/vecnorm.hpp"

namespace betatri {

// The five norm products entering the Kolmogorov-distance bound:
//   A1 = ||mu||_{3/2}^{3/4} ||mu||_{5/2}^{5/4}
//   A2 = ||mu||_{3/2}^{3/4} ||mu||_2^{1/2} ||mu||_{7/2}^{7/4} ||mu||_4^2
//   A3 = ||mu||_2^{5/2} ||mu||_5^5
//   A4 = ||mu||_2^{3/2} ||mu||_{5/2}^{5/2} ||mu||_5^{5/2}
//   A5 = ||mu||_{7/4}^{7/4} ||mu||_{7/2}^{7/4}
std::array<double, 5> a_terms(const hetero_vector& mu);

// ||mu||_2^{5/2} (||mu||_3^6 + ||mu||_2^2), the bound denominator.
double bound_denominator(const hetero_vector& mu);

// (A1 + ... + A5) / denominator. This is the bound with its universal
// constant set to 1: a rate, not a certified distance.
double kolmogorov_rate(const hetero_vector& mu);

// Rate exponent for blockwise designs mu_i = theta_r n^{-alpha/2}:
// piecewise linear, continuous, decreasing on (0, 1).
double eta(double alpha);

struct btilde_options {
    std::size_t max_n = 150; // the four-vertex sums are O(n^4)
};

// Exactly evaluated sums from the bound's proof. b22 splits by edge-triple
// shape: the two four-vertex configurations (path, star) plus the
// three-vertex configuration where the edge pair closes a triangle.
struct btilde_values {
    double b21 = 0.0;
    double b22_path = 0.0;
    double b22_star = 0.0;
    double b22_triangle = 0.0;
    double b3 = 0.0;
    double b5 = 0.0;

    double b22() const { return b22_path + b22_star + b22_triangle; }
    double b2() const { return b21 + b22(); }
};

btilde_values btilde_terms(const hetero_vector& mu, const btilde_options& opts = {});

struct bound_report {
    std::array<double, 5> a{};
    double denominator = 0.0;
    double rate_with_unit_constant = 0.0;
    std::optional<btilde_values> btilde;
    std::optional<double> eta_value;
};

bound_report compute_bound_report(const hetero_vector& mu, bool with_btilde = false,
                                  std::optional<double> alpha = std::nullopt,
                                  const btilde_options& opts = {});

} // namespace betatri
