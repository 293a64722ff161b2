#include "betatri/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "betatri/rng.hpp"

namespace betatri {

double edge_probability(double mu_i, double mu_j) {
    if (!(mu_i > 0.0) || !(mu_j > 0.0) || !std::isfinite(mu_i) || !std::isfinite(mu_j))
        throw std::domain_error("edge_probability needs strictly positive parameters");
    const double prod = mu_i * mu_j;
    double p = std::isinf(prod) ? 1.0 : prod / (1.0 + prod);
    // keep the open-interval contract under floating-point rounding
    if (p >= 1.0) p = std::nextafter(1.0, 0.0);
    return p;
}

hetero_vector mu_from_beta(std::span<const double> beta) {
    std::vector<double> mu(beta.size());
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (!std::isfinite(beta[i]))
            throw std::domain_error("beta entry " + std::to_string(i) + " is not finite");
        const double e = std::exp(beta[i]);
        if (!std::isfinite(e) || e <= 0.0)
            throw std::range_error("exp(beta) over/underflows at entry " + std::to_string(i) +
                                   " (beta = " + std::to_string(beta[i]) + ")");
        mu[i] = e;
    }
    return hetero_vector(std::move(mu));
}

block_design::block_design(unsigned k, std::vector<double> pi_in, std::vector<double> theta_in,
                           double alpha_in)
    : blocks(k), pi(std::move(pi_in)), theta(std::move(theta_in)), alpha(alpha_in) {
    if (blocks == 0) throw std::domain_error("block design needs at least one block");
    if (pi.size() != blocks || theta.size() != blocks)
        throw std::domain_error("block design needs exactly K weights and K thetas");
    double pi_sum = 0.0;
    for (double p : pi) {
        if (!(p > 0.0)) throw std::domain_error("block weights must be positive");
        pi_sum += p;
    }
    if (std::abs(pi_sum - 1.0) > 1e-12)
        throw std::domain_error("block weights must sum to 1, got " + std::to_string(pi_sum));
    for (double t : theta)
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::domain_error("block thetas must be positive and finite");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

std::vector<std::size_t> block_sizes(const block_design& design, std::size_t n) {
    const unsigned k = design.blocks;
    if (n < k) throw std::domain_error("need n >= K to place every block");

    std::vector<std::int64_t> sizes(k);
    std::int64_t assigned = 0;
    for (unsigned r = 0; r < k; ++r) {
        sizes[r] = std::llround(design.pi[r] * static_cast<double>(n));
        assigned += sizes[r];
    }
    // Rounding residual goes to the largest block (by weight, first on ties).
    const unsigned largest = static_cast<unsigned>(
        std::max_element(design.pi.begin(), design.pi.end()) - design.pi.begin());
    sizes[largest] += static_cast<std::int64_t>(n) - assigned;
    std::vector<std::size_t> out(k);
    for (unsigned r = 0; r < k; ++r) {
        if (sizes[r] < 1)
            throw std::domain_error("block " + std::to_string(r) +
                                    " would be empty at n = " + std::to_string(n));
        out[r] = static_cast<std::size_t>(sizes[r]);
    }
    return out;
}

hetero_vector block_mu(const block_design& design, std::size_t n) {
    const auto sizes = block_sizes(design, n);
    const double scale = std::pow(static_cast<double>(n), -0.5 * design.alpha);
    std::vector<double> mu;
    mu.reserve(n);
    for (unsigned r = 0; r < design.blocks; ++r)
        mu.insert(mu.end(), sizes[r], design.theta[r] * scale);
    return hetero_vector(std::move(mu));
}

condition_report diagnose_conditions(const hetero_vector& mu) {
    condition_report rep;
    rep.mu_max = mu.max_entry();
    rep.l2_norm = norm(mu, 2.0);
    rep.l32_ratio = norm_pow(mu, 1.5) / std::pow(rep.l2_norm, 6.0);
    rep.ratio_cond = minmax_ratio(mu) / std::pow(rep.l2_norm, 1.5);
    return rep;
}

graph_sample sample_graph(const model_spec& spec, std::uint64_t seed) {
    const auto& mu = spec.mu.entries();
    const std::size_t n = mu.size();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        const double mu_i = mu[i];
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double p = mu_i * mu[j] / (1.0 + mu_i * mu[j]);
            if (edge_uniform(seed, i, j) < p) edges.emplace_back(i, j);
        }
    }
    return graph_sample(n, edges, seed);
}

namespace {

hetero_vector parse_mu_lines(const std::string& text, const std::string& origin) {
    std::vector<double> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // trim whitespace
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(first, last - first + 1);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            throw std::domain_error(origin + ":" + std::to_string(line_no) +
                                    ": not a number: '" + token + "'");
        }
        if (used != token.size())
            throw std::domain_error(origin + ":" + std::to_string(line_no) +
                                    ": trailing garbage after number: '" + token + "'");
        if (!std::isfinite(value) || value <= 0.0)
            throw std::domain_error(origin + ":" + std::to_string(line_no) +
                                    ": entry must be positive, got " + token);
        entries.push_back(value);
    }
    if (entries.empty()) throw std::domain_error(origin + ": no entries found");
    return hetero_vector(std::move(entries));
}

hetero_vector parse_mu_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::domain_error(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array()) throw std::domain_error(origin + ": expected a JSON array");
    std::vector<double> entries;
    entries.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        if (!doc[i].is_number())
            throw std::domain_error(origin + ": element " + std::to_string(i + 1) +
                                    " is not a number");
        const double value = doc[i].get<double>();
        if (!std::isfinite(value) || value <= 0.0)
            throw std::domain_error(origin + ": element " + std::to_string(i + 1) +
                                    " must be positive, got " + std::to_string(value));
        entries.push_back(value);
    }
    if (entries.empty()) throw std::domain_error(origin + ": empty array");
    return hetero_vector(std::move(entries));
}

} // namespace

hetero_vector parse_mu_text(const std::string& text, const std::string& origin) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::domain_error(origin + ": empty input");
    if (text[first] == '[') return parse_mu_json(text, origin);
    return parse_mu_lines(text, origin);
}

hetero_vector load_mu_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open mu file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mu_text(buf.str(), path.string());
}

} // namespace betatri
