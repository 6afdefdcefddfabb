#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace citeflow {

enum class Field : std::uint8_t { CS = 0, MA = 1, PHY = 2, OTHER = 3 };

/// The three fields that take part in models and signatures.
inline constexpr std::array<Field, 3> kModelFields{Field::CS, Field::MA, Field::PHY};
inline constexpr std::size_t kNumFields = 4;

constexpr std::size_t index_of(Field f) { return static_cast<std::size_t>(f); }
constexpr bool is_model_field(Field f) { return f != Field::OTHER; }

/// Short label used in tables: CS, MA, PHY, OTHER.
constexpr std::string_view label(Field f) {
    switch (f) {
        case Field::CS: return "CS";
        case Field::MA: return "MA";
        case Field::PHY: return "PHY";
        case Field::OTHER: return "OTHER";
    }
    return "OTHER";
}

/// Token used in corpus files: cs, math, physics, other.
constexpr std::string_view file_token(Field f) {
    switch (f) {
        case Field::CS: return "cs";
        case Field::MA: return "math";
        case Field::PHY: return "physics";
        case Field::OTHER: return "other";
    }
    return "other";
}

/// Corpus-file token to Field; anything unrecognised is OTHER.
inline Field field_from_token(std::string_view token) {
    if (token == "cs") return Field::CS;
    if (token == "math") return Field::MA;
    if (token == "physics") return Field::PHY;
    return Field::OTHER;
}

/// Accepts either a table label (CS/MA/PHY/OTHER) or a file token.
inline std::optional<Field> parse_field(std::string_view s) {
    if (s == "CS" || s == "cs") return Field::CS;
    if (s == "MA" || s == "math") return Field::MA;
    if (s == "PHY" || s == "physics") return Field::PHY;
    if (s == "OTHER" || s == "other") return Field::OTHER;
    return std::nullopt;
}

}  // namespace citeflow
