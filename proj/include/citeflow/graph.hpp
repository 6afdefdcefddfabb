#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citeflow/error.hpp"
#include "citeflow/field.hpp"
#include "citeflow/random.hpp"
#include "citeflow/weighted.hpp"

namespace citeflow {

using PaperId = std::uint32_t;
using Year = int;

struct YearRange {
    Year first = 1995;
    Year last = 2017;

    bool contains(Year y) const noexcept { return y >= first && y <= last; }
    bool empty() const noexcept { return last < first; }
    friend bool operator==(const YearRange&, const YearRange&) = default;
};

enum class Origin : std::uint8_t { warmup, simulated };

struct Paper {
    Year year = 0;
    Field field = Field::OTHER;
    Origin origin = Origin::warmup;
    std::vector<PaperId> refs;
};

/// Growing directed citation graph. Ids are dense and assigned in insertion
/// order; within each field, papers must arrive with non-decreasing years so
/// that "published no later than y" is a prefix of the field's index.
///
/// Sampling weight of a paper is in_degree + 1.
class CitationGraph {
public:
    explicit CitationGraph(YearRange years = {}) : years_(years) {
        if (years.empty()) throw Error("CitationGraph: empty year range");
    }

    const YearRange& year_range() const noexcept { return years_; }
    std::size_t size() const noexcept { return papers_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    bool contains(PaperId v) const noexcept { return v < papers_.size(); }

    PaperId add_paper(Year year, Field field, Origin origin = Origin::warmup) {
        if (!years_.contains(year)) {
            throw GraphError(GraphErrc::year_out_of_range,
                             "year " + std::to_string(year) + " outside [" +
                                 std::to_string(years_.first) + ", " + std::to_string(years_.last) + "]");
        }
        auto& index = fields_[index_of(field)];
        if (!index.years.empty() && year < index.years.back()) {
            throw GraphError(GraphErrc::year_out_of_order,
                             "year " + std::to_string(year) + " precedes last " +
                                 std::string(label(field)) + " paper (" +
                                 std::to_string(index.years.back()) + ")");
        }
        const auto id = static_cast<PaperId>(papers_.size());
        papers_.push_back(Paper{year, field, origin, {}});
        children_.emplace_back();
        slot_.push_back(static_cast<std::uint32_t>(index.ids.size()));
        index.ids.push_back(id);
        index.years.push_back(year);
        index.weights.push_back(1);
        return id;
    }

    void add_citation(PaperId src, PaperId dst) {
        if (src == dst) throw GraphError(GraphErrc::self_citation, "paper " + std::to_string(src));
        if (!contains(src) || !contains(dst)) {
            throw GraphError(GraphErrc::missing_endpoint,
                             std::to_string(src) + " -> " + std::to_string(dst));
        }
        auto& source = papers_[src];
        if (papers_[dst].year > source.year) {
            throw GraphError(GraphErrc::future_target,
                             std::to_string(src) + " (" + std::to_string(source.year) + ") -> " +
                                 std::to_string(dst) + " (" + std::to_string(papers_[dst].year) + ")");
        }
        if (std::find(source.refs.begin(), source.refs.end(), dst) != source.refs.end()) {
            throw GraphError(GraphErrc::duplicate_edge, std::to_string(src) + " -> " + std::to_string(dst));
        }
        source.refs.push_back(dst);
        children_[dst].push_back(src);
        ++edges_;
        const auto& target = papers_[dst];
        fields_[index_of(target.field)].weights.set(slot_[dst], children_[dst].size() + 1);
    }

    const Paper& paper(PaperId v) const {
        require(v);
        return papers_[v];
    }
    Year year(PaperId v) const { return paper(v).year; }
    Field field(PaperId v) const { return paper(v).field; }
    std::span<const PaperId> refs(PaperId v) const { return paper(v).refs; }

    std::size_t in_degree(PaperId v) const {
        require(v);
        return children_[v].size();
    }

    /// Current weight stored in the field index (in_degree + 1 when consistent).
    std::uint64_t stored_weight(PaperId v) const {
        require(v);
        return fields_[index_of(papers_[v].field)].weights.value(slot_[v]);
    }

    /// Citers of v in insertion order.
    std::span<const PaperId> children(PaperId v) const {
        require(v);
        return children_[v];
    }

    std::vector<PaperId> children_of(PaperId v, std::optional<Field> filter = std::nullopt) const {
        require(v);
        if (!filter) return children_[v];
        std::vector<PaperId> out;
        for (auto c : children_[v]) {
            if (papers_[c].field == *filter) out.push_back(c);
        }
        return out;
    }

    /// Papers of `f` in insertion (and year) order.
    std::span<const PaperId> field_papers(Field f) const { return fields_[index_of(f)].ids; }

    /// Number of papers of `f` published no later than year_max.
    std::size_t candidate_count(Field f, Year year_max) const {
        const auto& ys = fields_[index_of(f)].years;
        return static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), year_max) - ys.begin());
    }

    /// Total weight of the candidates of `f` published no later than year_max.
    std::uint64_t candidate_weight(Field f, Year year_max) const {
        return fields_[index_of(f)].weights.prefix(candidate_count(f, year_max));
    }

    /// Draws v of field `f` with year(v) <= year_max, with probability
    /// proportional to in_degree(v) + 1. One call to uniform_below.
    template <RandomSource R>
    PaperId preferential_sample(Field f, Year year_max, R& rng) const {
        const std::size_t n = candidate_count(f, year_max);
        if (n == 0) {
            throw GraphError(GraphErrc::empty_candidates,
                             "no " + std::string(label(f)) + " paper published by " + std::to_string(year_max));
        }
        const auto& index = fields_[index_of(f)];
        return index.ids[sample_prefix(index.weights, n, rng)];
    }

private:
    void require(PaperId v) const {
        if (!contains(v)) throw GraphError(GraphErrc::missing_paper, "paper " + std::to_string(v));
    }

    struct FieldIndex {
        std::vector<PaperId> ids;
        std::vector<Year> years;
        FenwickTree weights;
    };

    YearRange years_;
    std::vector<Paper> papers_;
    std::vector<std::vector<PaperId>> children_;
    std::vector<std::uint32_t> slot_;  // position of each paper within its field index
    std::array<FieldIndex, kNumFields> fields_{};
    std::size_t edges_ = 0;
};

/// Chooses one of `pool` with probability proportional to in_degree + 1.
/// Linear in |pool|; one call to uniform_below.
template <RandomSource R>
PaperId preferential_choice(const CitationGraph& graph, std::span<const PaperId> pool, R& rng) {
    if (pool.empty()) throw GraphError(GraphErrc::empty_candidates, "empty pool");
    std::uint64_t total = 0;
    for (auto v : pool) total += graph.in_degree(v) + 1;
    auto target = uniform_below(rng, total);
    for (auto v : pool) {
        const std::uint64_t w = graph.in_degree(v) + 1;
        if (target < w) return v;
        target -= w;
    }
    return pool.back();
}

}  // namespace citeflow
