#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citeflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GraphErrc {
    year_out_of_range,
    year_out_of_order,
    self_citation,
    missing_endpoint,
    future_target,
    duplicate_edge,
    empty_candidates,
    missing_paper,
};

inline const char* to_string(GraphErrc code) {
    switch (code) {
        case GraphErrc::year_out_of_range: return "year out of range";
        case GraphErrc::year_out_of_order: return "year out of order";
        case GraphErrc::self_citation: return "self-citation";
        case GraphErrc::missing_endpoint: return "missing endpoint";
        case GraphErrc::future_target: return "future-dated target";
        case GraphErrc::duplicate_edge: return "duplicate edge";
        case GraphErrc::empty_candidates: return "empty candidate set";
        case GraphErrc::missing_paper: return "missing paper";
    }
    return "graph error";
}

class GraphError : public Error {
public:
    GraphError(GraphErrc code, const std::string& detail)
        : Error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    GraphErrc code() const noexcept { return code_; }

private:
    GraphErrc code_;
};

/// Malformed tabular input. `line()` is 1-based and counts the header.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid configuration value; `key()` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& detail)
        : Error("config key '" + key + "': " + detail), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A broken internal invariant (maps to CLI exit status 3).
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace citeflow
