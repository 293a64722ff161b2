#include "betatri/vecnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace betatri {

namespace {

// Relative slack absorbing floating-point noise in mathematically tight
// cases (e.g. constant vectors, where both sides are equal).
constexpr double kInequalitySlack = 1e-12;

void require_positive_exponent(double s, const char* name) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::domain_error(std::string(name) + " must be a positive real, got " +
                                std::to_string(s));
}

double ascending_pow_sum(std::vector<double> values, double s) {
    std::sort(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values) acc += std::pow(v, s);
    return acc;
}

} // namespace

hetero_vector::hetero_vector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2)
        throw std::domain_error("heterogeneity vector needs at least 2 entries, got " +
                                std::to_string(entries_.size()));
    min_ = entries_.front();
    max_ = entries_.front();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const double e = entries_[i];
        if (!std::isfinite(e) || e <= 0.0)
            throw std::domain_error("heterogeneity entry " + std::to_string(i) +
                                    " must be strictly positive and finite, got " +
                                    std::to_string(e));
        min_ = std::min(min_, e);
        max_ = std::max(max_, e);
    }
}

double norm_pow(const hetero_vector& v, double s) {
    require_positive_exponent(s, "norm exponent");
    return ascending_pow_sum(v.entries(), s);
}

double norm(const hetero_vector& v, double s) {
    return std::pow(norm_pow(v, s), 1.0 / s);
}

double minmax_ratio(const hetero_vector& v) {
    return v.max_entry() / v.min_entry();
}

inequality_witness check_interpolation(const hetero_vector& v, double s, double t) {
    require_positive_exponent(s, "s");
    require_positive_exponent(t, "t");
    const double mid = norm_pow(v, 0.5 * (s + t));
    inequality_witness w;
    w.lhs = mid * mid; // ||v||_{(s+t)/2}^{s+t}
    w.rhs = norm_pow(v, s) * norm_pow(v, t);
    w.holds = w.lhs <= w.rhs * (1.0 + kInequalitySlack);
    return w;
}

inequality_witness check_reverse_cs(const hetero_vector& x, const hetero_vector& y,
                                    double s, double t) {
    require_positive_exponent(s, "s");
    require_positive_exponent(t, "t");
    if (x.size() != y.size())
        throw std::domain_error("reverse Cauchy-Schwarz needs equal lengths, got " +
                                std::to_string(x.size()) + " and " + std::to_string(y.size()));

    // Cross sum in ascending order of the products, same determinism contract
    // as norm_pow.
    std::vector<double> cross(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        cross[i] = std::pow(x[i], 0.5 * s) * std::pow(y[i], 0.5 * t);
    std::sort(cross.begin(), cross.end());
    double cross_sum = 0.0;
    for (double c : cross) cross_sum += c;

    const double extremes = std::pow(x.max_entry() / x.min_entry(), 0.5 * s) *
                            std::pow(y.max_entry() / y.min_entry(), 0.5 * t);
    inequality_witness w;
    w.lhs = norm_pow(x, s) * norm_pow(y, t);
    w.rhs = extremes * cross_sum * cross_sum;
    w.holds = w.lhs <= w.rhs * (1.0 + kInequalitySlack);
    return w;
}

inequality_witness check_reverse_cs_diagonal(const hetero_vector& mu, double s, double t) {
    require_positive_exponent(s, "s");
    require_positive_exponent(t, "t");
    inequality_witness w;
    w.lhs = norm_pow(mu, s) * norm_pow(mu, t);
    w.rhs = std::pow(minmax_ratio(mu), 0.5 * (s + t)) * norm_pow(mu, 0.5 * (s + t)) *
            norm_pow(mu, 0.5 * (s + t));
    w.holds = w.lhs <= w.rhs * (1.0 + kInequalitySlack);
    return w;
}

} // namespace betatri
