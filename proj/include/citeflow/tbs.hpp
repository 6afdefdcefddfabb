#pragma once

// Temporal bucket signatures: for one citation type (citing field -> target
// kind), the distribution of target publication buckets for each citing
// bucket, as a lower-triangular row-stochastic matrix.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "citeflow/csv.hpp"
#include "citeflow/error.hpp"
#include "citeflow/field.hpp"
#include "citeflow/graph.hpp"

namespace citeflow {

struct Bucketing {
    Year start_year = 1995;
    int width = 5;
    Year end_year = 2017;

    void validate() const {
        if (width < 1) throw Error("bucketing: width must be >= 1");
        if (end_year < start_year) throw Error("bucketing: end_year precedes start_year");
    }

    std::size_t count() const { return static_cast<std::size_t>((end_year - start_year) / width) + 1; }

    /// Bucket of year y; years outside [start_year, end_year] are clamped.
    std::size_t assign(Year y) const {
        const Year clamped = std::clamp(y, start_year, end_year);
        return static_cast<std::size_t>((clamped - start_year) / width);
    }

    friend bool operator==(const Bucketing&, const Bucketing&) = default;
};

inline std::size_t assign_bucket(Year y, const Bucketing& b) { return b.assign(y); }

enum class DestKind : std::uint8_t { self, CS, MA, PHY };

constexpr std::string_view label(DestKind d) {
    switch (d) {
        case DestKind::self: return "self";
        case DestKind::CS: return "CS";
        case DestKind::MA: return "MA";
        case DestKind::PHY: return "PHY";
    }
    return "self";
}

constexpr DestKind dest_kind_of(Field f) {
    switch (f) {
        case Field::CS: return DestKind::CS;
        case Field::MA: return DestKind::MA;
        default: return DestKind::PHY;
    }
}

inline std::optional<DestKind> parse_dest_kind(std::string_view s) {
    if (s == "self") return DestKind::self;
    if (s == "CS") return DestKind::CS;
    if (s == "MA") return DestKind::MA;
    if (s == "PHY") return DestKind::PHY;
    return std::nullopt;
}

struct CitationType {
    Field source = Field::CS;
    DestKind dest = DestKind::self;

    /// Whether a citation from a `source` paper to a `target` paper is of this type.
    bool matches(Field src, Field target) const {
        if (src != source) return false;
        if (dest == DestKind::self) return target == source;
        return target != source && dest_kind_of(target) == dest && is_model_field(target);
    }

    std::string name() const { return std::string(label(source)) + "->" + std::string(label(dest)); }

    friend bool operator==(const CitationType&, const CitationType&) = default;
};

/// The nine citation types in reporting order: six cross-field, then self.
inline constexpr std::array<CitationType, 9> kCitationTypes{{
    {Field::CS, DestKind::MA},
    {Field::CS, DestKind::PHY},
    {Field::MA, DestKind::CS},
    {Field::MA, DestKind::PHY},
    {Field::PHY, DestKind::CS},
    {Field::PHY, DestKind::MA},
    {Field::CS, DestKind::self},
    {Field::MA, DestKind::self},
    {Field::PHY, DestKind::self},
}};

class Signature {
public:
    Signature() = default;
    Signature(CitationType type, Bucketing b)
        : type_(type), bucketing_(b), n_(b.count()), counts_(n_ * n_, 0), fractions_(n_ * n_, 0.0) {}

    const CitationType& type() const noexcept { return type_; }
    const Bucketing& bucketing() const noexcept { return bucketing_; }
    std::size_t buckets() const noexcept { return n_; }

    std::uint64_t count(std::size_t i, std::size_t j) const { return counts_.at(i * n_ + j); }
    double fraction(std::size_t i, std::size_t j) const { return fractions_.at(i * n_ + j); }

    std::uint64_t row_total(std::size_t i) const {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < n_; ++j) s += counts_[i * n_ + j];
        return s;
    }
    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto c : counts_) s += c;
        return s;
    }
    bool empty() const { return total() == 0; }

    /// Number of rows holding at least one citation.
    std::size_t populated_rows() const {
        std::size_t r = 0;
        for (std::size_t i = 0; i < n_; ++i) r += row_total(i) > 0 ? 1 : 0;
        return r;
    }

    void add(std::size_t i, std::size_t j, std::uint64_t c = 1) {
        if (j > i) throw InvariantError("signature cell above the diagonal (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") for " + type_.name());
        counts_.at(i * n_ + j) += c;
    }

    /// Recomputes fractions by row-normalizing counts; zero rows stay zero.
    void normalize() {
        for (std::size_t i = 0; i < n_; ++i) {
            const auto t = row_total(i);
            for (std::size_t j = 0; j < n_; ++j) {
                fractions_[i * n_ + j] =
                    t == 0 ? 0.0 : static_cast<double>(counts_[i * n_ + j]) / static_cast<double>(t);
            }
        }
    }

    /// Overrides a stored fraction (used when reading signature files).
    void set_fraction(std::size_t i, std::size_t j, double f) { fractions_.at(i * n_ + j) = f; }

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    CitationType type_{};
    Bucketing bucketing_{};
    std::size_t n_ = 0;
    std::vector<std::uint64_t> counts_;
    std::vector<double> fractions_;
};

/// One pass over all edges, filling every signature whose type matches.
inline std::vector<Signature> compute_signatures(const CitationGraph& graph, std::span<const CitationType> types,
                                                 const Bucketing& b) {
    b.validate();
    std::vector<Signature> out;
    out.reserve(types.size());
    for (const auto& t : types) out.emplace_back(t, b);
    for (PaperId u = 0; u < graph.size(); ++u) {
        const auto& src = graph.paper(u);
        if (!is_model_field(src.field) || src.refs.empty()) continue;
        const std::size_t i = b.assign(src.year);
        for (auto v : src.refs) {
            const auto& dst = graph.paper(v);
            const std::size_t j = b.assign(dst.year);
            for (auto& sig : out) {
                if (sig.type().matches(src.field, dst.field)) sig.add(i, j);
            }
        }
    }
    for (auto& sig : out) sig.normalize();
    return out;
}

inline Signature compute_tbs(const CitationGraph& graph, CitationType type, const Bucketing& b) {
    const std::array<CitationType, 1> one{type};
    return std::move(compute_signatures(graph, one, b).front());
}

inline std::vector<Signature> all_signatures(const CitationGraph& graph, const Bucketing& b) {
    return compute_signatures(graph, kCitationTypes, b);
}

/// Sum of absolute cell differences between two signatures of one type and shape.
inline double l1_distance(const Signature& a, const Signature& b) {
    if (!(a.type() == b.type())) {
        throw Error("l1_distance: citation type mismatch (" + a.type().name() + " vs " + b.type().name() + ")");
    }
    if (!(a.bucketing() == b.bucketing())) throw Error("l1_distance: bucketing mismatch for " + a.type().name());
    double d = 0.0;
    for (std::size_t i = 0; i < a.buckets(); ++i) {
        for (std::size_t j = 0; j < a.buckets(); ++j) d += std::abs(a.fraction(i, j) - b.fraction(i, j));
    }
    return d;
}

inline const Signature* find_signature(const std::vector<Signature>& set, const CitationType& t) {
    for (const auto& s : set) {
        if (s.type() == t) return &s;
    }
    return nullptr;
}

/// Shortest text that reads back to exactly `x`.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

/// `source_field,dest_kind,src_bucket,dst_bucket,count,fraction`, one row per
/// lower-triangular cell.
inline void write_signatures_csv(const std::vector<Signature>& set, std::ostream& out) {
    out << "source_field,dest_kind,src_bucket,dst_bucket,count,fraction\n";
    for (const auto& sig : set) {
        for (std::size_t i = 0; i < sig.buckets(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                out << label(sig.type().source) << ',' << label(sig.type().dest) << ',' << i << ',' << j << ','
                    << sig.count(i, j) << ',' << format_double(sig.fraction(i, j)) << '\n';
            }
        }
    }
}

inline std::vector<Signature> read_signatures_csv(std::istream& in, const Bucketing& b) {
    b.validate();
    csv::Reader reader(in);
    csv::expect_header(reader, {"source_field", "dest_kind", "src_bucket", "dst_bucket", "count", "fraction"});
    std::vector<Signature> out;
    csv::Record row;
    auto parse_size = [](const std::string& s, std::size_t line, const char* what) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
        }
        return v;
    };
    while (reader.next(row)) {
        if (csv::is_blank(row)) continue;
        if (row.fields.size() != 6) throw ParseError(row.line, "expected 6 columns");
        auto src = parse_field(row.fields[0]);
        auto dest = parse_dest_kind(row.fields[1]);
        if (!src || !is_model_field(*src)) throw ParseError(row.line, "bad source_field '" + row.fields[0] + "'");
        if (!dest) throw ParseError(row.line, "bad dest_kind '" + row.fields[1] + "'");
        const CitationType type{*src, *dest};
        const auto i = parse_size(row.fields[2], row.line, "src_bucket");
        const auto j = parse_size(row.fields[3], row.line, "dst_bucket");
        const auto c = parse_size(row.fields[4], row.line, "count");
        double f = 0.0;
        {
            const auto& s = row.fields[5];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), f);
            if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(row.line, "bad fraction '" + s + "'");
        }
        if (i >= b.count() || j > i) throw ParseError(row.line, "cell outside the lower triangle");
        auto it = std::find_if(out.begin(), out.end(), [&](const Signature& s) { return s.type() == type; });
        if (it == out.end()) {
            out.emplace_back(type, b);
            it = std::prev(out.end());
        }
        it->add(i, j, c);
        it->set_fraction(i, j, f);
    }
    return out;
}

inline nlohmann::ordered_json to_json(const Bucketing& b) {
    return {{"start_year", b.start_year}, {"width", b.width}, {"end_year", b.end_year}};
}

inline nlohmann::ordered_json signatures_to_json(const std::vector<Signature>& set) {
    nlohmann::ordered_json doc;
    doc["bucketing"] = set.empty() ? to_json(Bucketing{}) : to_json(set.front().bucketing());
    auto& arr = doc["signatures"] = nlohmann::ordered_json::array();
    for (const auto& sig : set) {
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < sig.buckets(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                cells.push_back({{"src_bucket", i}, {"dst_bucket", j}, {"count", sig.count(i, j)},
                                 {"fraction", sig.fraction(i, j)}});
            }
        }
        arr.push_back({{"source_field", std::string(label(sig.type().source))},
                       {"dest_kind", std::string(label(sig.type().dest))},
                       {"empty", sig.empty()},
                       {"cells", std::move(cells)}});
    }
    return doc;
}

}  // namespace citeflow
