#pragma once

// Run configuration as a JSON document. Every key is optional; absent keys
// take the defaults below, and the fully resolved document is what gets
// written as manifest.json, so a manifest is itself a valid config.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "citeflow/error.hpp"
#include "citeflow/graph.hpp"
#include "citeflow/models.hpp"
#include "citeflow/tbs.hpp"

namespace citeflow {

struct RunConfig {
    std::string papers;  // papers CSV path, empty if unset
    std::string edges;   // edges CSV path, empty if unset
    ModelParams params;
    std::uint64_t seed = 0;
    YearRange warmup_range{1995, 2009};
    YearRange sim_range{2010, 2017};
    Bucketing bucketing{};
    std::size_t min_refs = 5;

    void validate() const {
        params.validate();
        if (warmup_range.empty()) throw ConfigError("warmup_range", "first year after last year");
        if (sim_range.empty()) throw ConfigError("sim_range", "first year after last year");
        if (!(warmup_range.last < sim_range.first)) {
            throw ConfigError("sim_range", "must start after warmup_range ends");
        }
        if (bucketing.width < 1) throw ConfigError("bucketing", "width must be >= 1");
        if (bucketing.end_year < bucketing.start_year) throw ConfigError("bucketing", "end_year before start_year");
    }
};

namespace detail {

using json = nlohmann::ordered_json;

inline double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
}

inline std::uint64_t get_count(const json& v, const std::string& key) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

inline int get_year(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer year");
    return v.get<int>();
}

inline YearRange get_range(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(key, "expected [first_year, last_year]");
    return {get_year(v[0], key), get_year(v[1], key)};
}

inline std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
}

}  // namespace detail

inline constexpr std::string_view to_string(OutfieldPool p) {
    return p == OutfieldPool::per_paper ? "per_paper" : "global";
}

/// Applies one key of a config document; throws ConfigError for unknown keys
/// and type mismatches.
inline void apply_config_key(RunConfig& cfg, const std::string& key, const nlohmann::ordered_json& v) {
    using namespace detail;
    auto& p = cfg.params;
    if (key == "papers") {
        cfg.papers = get_string(v, key);
    } else if (key == "edges") {
        cfg.edges = get_string(v, key);
    } else if (key == "model") {
        auto kind = parse_model(get_string(v, key));
        if (!kind) throw ConfigError(key, "unknown model '" + v.get<std::string>() + "'");
        p.kind = *kind;
    } else if (key == "m") {
        p.m = get_count(v, key);
    } else if (key == "theta_in") {
        p.theta_in = get_number(v, key);
    } else if (key == "lambda_in") {
        p.lambda_in = get_number(v, key);
    } else if (key == "theta_out") {
        p.theta_out = get_number(v, key);
    } else if (key == "lambda_out") {
        p.lambda_out = get_number(v, key);
    } else if (key == "max_relay_depth") {
        p.max_relay_depth = get_count(v, key);
    } else if (key == "top_cited_k") {
        p.top_cited_k = get_count(v, key);
    } else if (key == "outfield_pool") {
        const auto s = get_string(v, key);
        if (s == "per_paper") {
            p.outfield_pool = OutfieldPool::per_paper;
        } else if (s == "global") {
            p.outfield_pool = OutfieldPool::global;
        } else {
            throw ConfigError(key, "expected 'per_paper' or 'global'");
        }
    } else if (key == "seed") {
        cfg.seed = get_count(v, key);
    } else if (key == "warmup_range") {
        cfg.warmup_range = get_range(v, key);
    } else if (key == "sim_range") {
        cfg.sim_range = get_range(v, key);
    } else if (key == "min_refs") {
        cfg.min_refs = get_count(v, key);
    } else if (key == "bucketing") {
        if (!v.is_object()) throw ConfigError(key, "expected an object");
        for (const auto& [sub, sv] : v.items()) {
            const std::string full = "bucketing." + sub;
            if (sub == "start_year") {
                cfg.bucketing.start_year = get_year(sv, full);
            } else if (sub == "width") {
                cfg.bucketing.width = get_year(sv, full);
            } else if (sub == "end_year") {
                cfg.bucketing.end_year = get_year(sv, full);
            } else {
                throw ConfigError(full, "unknown key");
            }
        }
    } else {
        throw ConfigError(key, "unknown key");
    }
}

inline RunConfig parse_config(const nlohmann::ordered_json& doc) {
    if (doc.is_null()) return RunConfig{};
    if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) apply_config_key(cfg, key, value);
    cfg.validate();
    return cfg;
}

/// Parses JSON text; blank text yields the all-defaults config.
inline RunConfig parse_config(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return RunConfig{};
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

inline nlohmann::ordered_json params_to_json(const ModelParams& p) {
    return {{"model", std::string(name(p.kind))},
            {"m", p.m},
            {"theta_in", p.theta_in},
            {"lambda_in", p.lambda_in},
            {"theta_out", p.theta_out},
            {"lambda_out", p.lambda_out},
            {"max_relay_depth", p.max_relay_depth},
            {"top_cited_k", p.top_cited_k},
            {"outfield_pool", std::string(to_string(p.outfield_pool))}};
}

/// The resolved configuration, every default spelled out.
inline nlohmann::ordered_json to_manifest(const RunConfig& cfg) {
    nlohmann::ordered_json doc = params_to_json(cfg.params);
    doc["seed"] = cfg.seed;
    doc["warmup_range"] = {cfg.warmup_range.first, cfg.warmup_range.last};
    doc["sim_range"] = {cfg.sim_range.first, cfg.sim_range.last};
    doc["bucketing"] = to_json(cfg.bucketing);
    doc["min_refs"] = cfg.min_refs;
    doc["papers"] = cfg.papers;
    doc["edges"] = cfg.edges;
    return doc;
}

}  // namespace citeflow
