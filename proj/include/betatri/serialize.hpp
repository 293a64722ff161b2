#pragma once

// JSON conversions for all report types. Field names are snake_case and the
// top-level documents carry "schema_version": 1. Timing lives in a separate
// "metadata" object so result payloads are byte-identical across reruns.

#include <nlohmann/json.hpp>

#include "betatri/bounds.hpp"
#include "betatri/experiment.hpp"
#include "betatri/malliavin.hpp"
#include "betatri/model.hpp"
#include "betatri/moments.hpp"

namespace betatri {

inline constexpr int kSchemaVersion = 1;

inline void to_json(nlohmann::json& j, const moment_report& r) {
    j = {{"exact_mean", r.exact_mean}, {"exact_var", r.exact_var},
         {"asym_mean", r.asym_mean},   {"asym_var", r.asym_var},
         {"mean_ratio", r.mean_ratio}, {"var_ratio", r.var_ratio}};
}

inline void from_json(const nlohmann::json& j, moment_report& r) {
    j.at("exact_mean").get_to(r.exact_mean);
    j.at("exact_var").get_to(r.exact_var);
    j.at("asym_mean").get_to(r.asym_mean);
    j.at("asym_var").get_to(r.asym_var);
    j.at("mean_ratio").get_to(r.mean_ratio);
    j.at("var_ratio").get_to(r.var_ratio);
}

inline void to_json(nlohmann::json& j, const condition_report& r) {
    j = {{"mu_max", r.mu_max},
         {"l2_norm", r.l2_norm},
         {"l32_ratio", r.l32_ratio},
         {"ratio_cond", r.ratio_cond}};
}

inline void to_json(nlohmann::json& j, const btilde_values& b) {
    j = {{"b21", b.b21},
         {"b22_path", b.b22_path},
         {"b22_star", b.b22_star},
         {"b22_triangle", b.b22_triangle},
         {"b22", b.b22()},
         {"b2", b.b2()},
         {"b3", b.b3},
         {"b5", b.b5}};
}

inline void to_json(nlohmann::json& j, const bound_report& r) {
    j = {{"a_terms", r.a},
         {"denominator", r.denominator},
         {"rate_with_unit_constant", r.rate_with_unit_constant}};
    if (r.btilde) j["btilde"] = *r.btilde;
    if (r.eta_value) j["eta"] = *r.eta_value;
}

inline void to_json(nlohmann::json& j, const lln_stats& s) {
    j = {{"mean", s.mean}, {"sd", s.sd}};
}

inline void to_json(nlohmann::json& j, const regression_fit& f) {
    j = {{"slope", f.slope}, {"stderr", f.stderr_slope}};
}

inline void to_json(nlohmann::json& j, const clt_entry& e) {
    j = {{"n", e.n},
         {"d_kolmogorov", e.d_kolmogorov},
         {"moments", e.moments},
         {"lln_ratio", e.lln}};
}

inline void to_json(nlohmann::json& j, const oracle_check& c) {
    j = {{"name", c.name}, {"pass", c.pass}, {"max_deviation", c.max_deviation}};
}

inline void to_json(nlohmann::json& j, const oracle_report& r) {
    j = {{"n", r.n},
         {"trials", r.trials},
         {"seed", r.seed},
         {"states_enumerated", r.states_enumerated},
         {"all_pass", r.all_pass()},
         {"checks", r.checks}};
}

inline nlohmann::json config_json(const experiment_config& c) {
    nlohmann::json j;
    if (c.design) {
        j["design"] = {{"blocks", c.design->blocks},
                       {"pi", c.design->pi},
                       {"theta", c.design->theta},
                       {"alpha", c.design->alpha}};
    }
    if (c.mu) j["mu"] = c.mu->entries();
    j["n_list"] = c.n_list;
    j["replicates"] = c.replicates;
    j["master_seed"] = c.master_seed;
    j["use_exact_moments"] = c.use_exact_moments;
    return j;
}

// Result payload only; deterministic for a fixed config.
inline nlohmann::json experiment_result_json(const clt_report& r) {
    nlohmann::json j;
    j["per_n"] = r.entries;
    if (r.rate) j["rate_fit"] = *r.rate;
    if (r.eta_value) j["eta"] = *r.eta_value;
    return j;
}

inline nlohmann::json experiment_document(const experiment_config& c, const clt_report& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_json(c);
    j["result"] = experiment_result_json(r);
    j["metadata"] = {{"wall_seconds", r.wall_seconds}};
    return j;
}

} // namespace betatri
