#include "betatri/moments.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace betatri {

namespace {

// Compensated accumulator; pairwise terms are folded into per-row partials
// and the partials are combined in ascending row order, so the O(n^3) sums
// are reproducible bit for bit.
struct kahan_sum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

Eigen::MatrixXd probability_matrix(const hetero_vector& mu) {
    const auto n = static_cast<Eigen::Index>(mu.size());
    Eigen::MatrixXd p(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double prod = mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
            const double value = prod / (1.0 + prod);
            p(i, j) = value;
            p(j, i) = value;
        }
    }
    return p;
}

// Symmetric square M = A * A, lower triangle valid.
void symmetric_square(const Eigen::MatrixXd& a, Eigen::MatrixXd& m) {
    m.setZero();
    m.selfadjointView<Eigen::Lower>().rankUpdate(a);
}

struct exact_moments {
    double mean = 0.0;
    double var = 0.0;
};

exact_moments exact_moments_generic(const hetero_vector& mu) {
    const auto n = static_cast<Eigen::Index>(mu.size());
    exact_moments out;
    if (n < 3) return out; // no triangle can exist

    Eigen::MatrixXd p = probability_matrix(mu);
    Eigen::MatrixXd h = p.array() * (1.0 - p.array());
    Eigen::MatrixXd m(n, n);

    // Pass 1, M = P^2: mean = (1/3) sum_{i<j} p_ij c_ij and the c^2 h term.
    symmetric_square(p, m);
    std::vector<double> mean_rows(static_cast<std::size_t>(n), 0.0);
    std::vector<double> t1_rows(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        kahan_sum mean_row, t1_row;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double c = m(j, i);
            mean_row.add(p(j, i) * c);
            t1_row.add(c * c * h(j, i));
        }
        mean_rows[static_cast<std::size_t>(i)] = mean_row.sum;
        t1_rows[static_cast<std::size_t>(i)] = t1_row.sum;
    }

    // Pass 2, M = H^2: the p^2 term and the pure triple-product term.
    symmetric_square(h, m);
    std::vector<double> t2_rows(static_cast<std::size_t>(n), 0.0);
    std::vector<double> t3_rows(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        kahan_sum t2_row, t3_row;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = m(j, i);
            const double pij = p(j, i);
            t2_row.add(pij * pij * d);
            t3_row.add(h(j, i) * d);
        }
        t2_rows[static_cast<std::size_t>(i)] = t2_row.sum;
        t3_rows[static_cast<std::size_t>(i)] = t3_row.sum;
    }

    kahan_sum mean_total, t1_total, t2_total, t3_total;
    for (Eigen::Index i = 0; i < n; ++i) {
        mean_total.add(mean_rows[static_cast<std::size_t>(i)]);
        t1_total.add(t1_rows[static_cast<std::size_t>(i)]);
        t2_total.add(t2_rows[static_cast<std::size_t>(i)]);
        t3_total.add(t3_rows[static_cast<std::size_t>(i)]);
    }
    out.mean = mean_total.sum / 3.0;
    out.var = t1_total.sum + t2_total.sum + t3_total.sum / 3.0;
    return out;
}

double count_pairs(double size) { return size * (size - 1.0) / 2.0; }
double count_triples(double size) { return size * (size - 1.0) * (size - 2.0) / 6.0; }

exact_moments exact_moments_block(const block_design& design, std::size_t n) {
    const unsigned k = design.blocks;
    const auto int_sizes = block_sizes(design, n);
    std::vector<double> sizes(k, 0.0);
    std::vector<double> value(k, 0.0);
    const double scale = std::pow(static_cast<double>(n), -0.5 * design.alpha);
    for (unsigned r = 0; r < k; ++r) {
        sizes[r] = static_cast<double>(int_sizes[r]);
        value[r] = design.theta[r] * scale;
    }

    auto pr = [&](unsigned r, unsigned s) {
        const double prod = value[r] * value[s];
        return prod / (1.0 + prod);
    };
    auto hr = [&](unsigned r, unsigned s) {
        const double p = pr(r, s);
        return p * (1.0 - p);
    };

    // Triple sums over block multisets r <= s <= t with multiplicities.
    auto triple_sum = [&](auto edge_weight) {
        double total = 0.0;
        for (unsigned r = 0; r < k; ++r)
            for (unsigned s = r; s < k; ++s)
                for (unsigned t = s; t < k; ++t) {
                    double count = 0.0;
                    if (r == s && s == t) count = count_triples(sizes[r]);
                    else if (r == s) count = count_pairs(sizes[r]) * sizes[t];
                    else if (s == t) count = sizes[r] * count_pairs(sizes[s]);
                    else count = sizes[r] * sizes[s] * sizes[t];
                    total += count * edge_weight(r, s) * edge_weight(s, t) * edge_weight(t, r);
                }
        return total;
    };

    exact_moments out;
    out.mean = triple_sum(pr);

    double t1 = 0.0, t2 = 0.0;
    for (unsigned r = 0; r < k; ++r)
        for (unsigned s = r; s < k; ++s) {
            const double pairs = r == s ? count_pairs(sizes[r]) : sizes[r] * sizes[s];
            double c = 0.0, d = 0.0;
            for (unsigned t = 0; t < k; ++t) {
                c += sizes[t] * pr(s, t) * pr(t, r);
                d += sizes[t] * hr(s, t) * hr(t, r);
            }
            c -= pr(s, r) * pr(r, r) + pr(s, s) * pr(s, r); // exclude k = i and k = j
            d -= hr(s, r) * hr(r, r) + hr(s, s) * hr(s, r);
            t1 += pairs * c * c * hr(r, s);
            t2 += pairs * pr(r, s) * pr(r, s) * d;
        }
    out.var = t1 + t2 + triple_sum(hr);
    return out;
}

moment_report report_from(const exact_moments& em, const hetero_vector& mu) {
    moment_report rep;
    rep.exact_mean = em.mean;
    rep.exact_var = em.var;
    rep.asym_mean = asymptotic_mean(mu);
    rep.asym_var = asymptotic_variance(mu);
    rep.mean_ratio = rep.exact_mean / rep.asym_mean;
    rep.var_ratio = rep.exact_var / rep.asym_var;
    return rep;
}

} // namespace

double exact_mean(const hetero_vector& mu) { return exact_moments_generic(mu).mean; }

double exact_variance(const hetero_vector& mu) { return exact_moments_generic(mu).var; }

double asymptotic_mean(const hetero_vector& mu) {
    return std::pow(norm_pow(mu, 2.0), 3.0) / 6.0;
}

double asymptotic_variance(const hetero_vector& mu) {
    const double l2 = norm_pow(mu, 2.0);
    const double l3 = norm_pow(mu, 3.0);
    return l2 * l2 * (3.0 * l3 * l3 + l2) / 6.0;
}

moment_report compute_moments(const hetero_vector& mu) {
    return report_from(exact_moments_generic(mu), mu);
}

moment_report compute_moments(const block_design& design, std::size_t n) {
    return report_from(exact_moments_block(design, n), block_mu(design, n));
}

double normalize(double t, const moment_report& report, bool use_exact) {
    const double mean = use_exact ? report.exact_mean : report.asym_mean;
    const double var = use_exact ? report.exact_var : report.asym_var;
    if (!(var > 0.0)) throw std::domain_error("normalize needs positive variance");
    return (t - mean) / std::sqrt(var);
}

std::vector<double> poisson_binomial_moments(std::span<const double> rates, int order) {
    if (order < 1 || order > 4)
        throw std::domain_error("moment order must be in {1, 2, 3, 4}, got " +
                                std::to_string(order));
    for (std::size_t i = 0; i < rates.size(); ++i)
        if (!(rates[i] > 0.0) || !(rates[i] < 1.0))
            throw std::domain_error("rate " + std::to_string(i) + " outside (0, 1): " +
                                    std::to_string(rates[i]));

    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
    for (double r : rates) {
        const double q = 1.0 - r;
        k1 += r;
        k2 += r * q;
        k3 += r * q * (1.0 - 2.0 * r);
        k4 += r * q * (1.0 - 6.0 * r + 6.0 * r * r);
    }
    std::vector<double> m;
    m.push_back(k1);
    if (order >= 2) m.push_back(k2 + k1 * k1);
    if (order >= 3) m.push_back(k3 + 3.0 * k2 * k1 + k1 * k1 * k1);
    if (order >= 4)
        m.push_back(k4 + 4.0 * k3 * k1 + 3.0 * k2 * k2 + 6.0 * k2 * k1 * k1 +
                    k1 * k1 * k1 * k1);
    return m;
}

double wedge_moment_sup_ratio(const hetero_vector& mu, int s) {
    if (s != 2 && s != 4) throw std::domain_error("wedge moment diagnostic supports s in {2, 4}");
    const auto n = static_cast<Eigen::Index>(mu.size());
    const double l2p = norm_pow(mu, 2.0);

    Eigen::MatrixXd p = probability_matrix(mu);
    Eigen::MatrixXd s1(n, n), s2(n, n), s3, s4;
    symmetric_square(p, s1);
    {
        Eigen::MatrixXd p2 = p.array().square();
        symmetric_square(p2, s2);
        if (s == 4) {
            s3.resize(n, n);
            s4.resize(n, n);
            Eigen::MatrixXd pk = p2.array() * p.array();
            symmetric_square(pk, s3);
            pk.array() *= p.array();
            symmetric_square(pk, s4);
        }
    }

    double sup = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double mm = mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
            const double k1 = s1(j, i);
            const double k2 = k1 - s2(j, i);
            double moment, denom;
            if (s == 2) {
                moment = k2 + k1 * k1;
                denom = l2p * mm + l2p * l2p * mm * mm;
            } else {
                const double k3 = k1 - 3.0 * s2(j, i) + 2.0 * s3(j, i);
                const double k4 = k1 - 7.0 * s2(j, i) + 12.0 * s3(j, i) - 6.0 * s4(j, i);
                moment = k4 + 4.0 * k3 * k1 + 3.0 * k2 * k2 + 6.0 * k2 * k1 * k1 +
                         k1 * k1 * k1 * k1;
                const double t = l2p * mm;
                denom = t + t * t * t * t;
            }
            sup = std::max(sup, moment / denom);
        }
    return sup;
}

} // namespace betatri
