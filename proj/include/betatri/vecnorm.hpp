#pragma once

#include <cstddef>
#include <vector>

namespace betatri {

// Positive heterogeneity parameter vector mu, one entry per vertex.
// Entries are validated once at construction: finite, strictly positive,
// length at least 2.
class hetero_vector {
public:
    explicit hetero_vector(std::vector<double> entries);

    const std::vector<double>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const noexcept { return entries_[i]; }
    double max_entry() const noexcept { return max_; }
    double min_entry() const noexcept { return min_; }

private:
    std::vector<double> entries_;
    double min_ = 0.0;
    double max_ = 0.0;
};

// sum_i v_i^s, accumulated in ascending order of magnitude so the result is
// identical on every platform and thread count. Fractional powers go through
// the platform pow (ulp-class accuracy; the inequality suite validates it).
double norm_pow(const hetero_vector& v, double s);

// L_s norm, (norm_pow)^{1/s}.
double norm(const hetero_vector& v, double s);

double minmax_ratio(const hetero_vector& v);

struct inequality_witness {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// ||v||_{(s+t)/2}^{s+t} <= ||v||_s^s * ||v||_t^t (norm interpolation).
inequality_witness check_interpolation(const hetero_vector& v, double s, double t);

// Reverse Cauchy-Schwarz for positive vectors:
// ||x||_s^s ||y||_t^t <= (x_max^{s/2} y_max^{t/2} / (x_min^{s/2} y_min^{t/2}))
//                          * (sum_i x_i^{s/2} y_i^{t/2})^2.
inequality_witness check_reverse_cs(const hetero_vector& x, const hetero_vector& y,
                                    double s, double t);

// Specialization of the reverse inequality to x = y = mu:
// ||mu||_s^s ||mu||_t^t <= (mu_max/mu_min)^{(s+t)/2} ||mu||_{(s+t)/2}^{s+t}.
inequality_witness check_reverse_cs_diagonal(const hetero_vector& mu, double s, double t);

} // namespace betatri
