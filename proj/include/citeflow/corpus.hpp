#pragma once

// Corpus ingestion: papers/edges CSV files, canonical dense ids, and the
// minimum-reference filter.
//
// Papers are stored sorted by publication year (stable with respect to file
// order) and dense ids follow that order, so any year-prefix of the corpus can
// be loaded into a CitationGraph with identical ids.

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "citeflow/csv.hpp"
#include "citeflow/error.hpp"
#include "citeflow/field.hpp"
#include "citeflow/graph.hpp"

namespace citeflow {

struct CorpusPaper {
    std::string external_id;
    Year year = 0;
    Field field = Field::OTHER;
    std::string subfield;

    friend bool operator==(const CorpusPaper&, const CorpusPaper&) = default;
};

struct CorpusEdge {
    PaperId src = 0;
    PaperId dst = 0;

    friend bool operator==(const CorpusEdge&, const CorpusEdge&) = default;
};

/// Counts of edge rows discarded while loading.
struct LoadReport {
    std::size_t unresolved = 0;  // endpoint id not among the papers
    std::size_t self = 0;
    std::size_t duplicate = 0;
    std::size_t future = 0;      // target published after the citing paper

    std::size_t total() const noexcept { return unresolved + self + duplicate + future; }
};

struct Corpus {
    std::vector<CorpusPaper> papers;
    std::vector<CorpusEdge> edges;
    std::unordered_map<std::string, PaperId> id_map;
    LoadReport report;

    std::size_t size() const noexcept { return papers.size(); }

    std::optional<PaperId> find(const std::string& external_id) const {
        auto it = id_map.find(external_id);
        if (it == id_map.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::size_t> out_degrees() const {
        std::vector<std::size_t> deg(papers.size(), 0);
        for (const auto& e : edges) ++deg[e.src];
        return deg;
    }

    /// Papers and edges are compared; the load report is not.
    friend bool operator==(const Corpus& a, const Corpus& b) {
        return a.papers == b.papers && a.edges == b.edges;
    }
};

namespace detail {

inline Year parse_year(const std::string& s, std::size_t line) {
    Year y = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, y);
    if (ec != std::errc{} || ptr != last || s.empty()) {
        throw ParseError(line, "non-numeric year '" + s + "'");
    }
    return y;
}

}  // namespace detail

/// Builds a corpus from already-parsed rows. Edge endpoints are external ids.
inline Corpus make_corpus(std::vector<CorpusPaper> papers,
                          const std::vector<std::pair<std::string, std::string>>& edges) {
    Corpus corpus;
    std::stable_sort(papers.begin(), papers.end(),
                     [](const CorpusPaper& a, const CorpusPaper& b) { return a.year < b.year; });
    corpus.papers = std::move(papers);
    corpus.id_map.reserve(corpus.papers.size());
    for (std::size_t i = 0; i < corpus.papers.size(); ++i) {
        auto [it, fresh] = corpus.id_map.emplace(corpus.papers[i].external_id, static_cast<PaperId>(i));
        if (!fresh) throw Error("duplicate paper id '" + corpus.papers[i].external_id + "'");
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size());
    for (const auto& [s, d] : edges) {
        auto src = corpus.find(s);
        auto dst = corpus.find(d);
        if (!src || !dst) {
            ++corpus.report.unresolved;
            continue;
        }
        if (*src == *dst) {
            ++corpus.report.self;
            continue;
        }
        if (corpus.papers[*dst].year > corpus.papers[*src].year) {
            ++corpus.report.future;
            continue;
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(*src) << 32) | *dst;
        if (!seen.insert(key).second) {
            ++corpus.report.duplicate;
            continue;
        }
        corpus.edges.push_back({*src, *dst});
    }
    return corpus;
}

/// Parses the papers file (`id,year,field,subfield`) and the edges file
/// (`src,dst`). Unknown field strings become OTHER; edges with unresolvable,
/// identical, future-dated or repeated endpoints are dropped and counted in
/// `report`. Malformed rows throw ParseError naming the line.
inline Corpus load_corpus(std::istream& papers_in, std::istream& edges_in) {
    std::vector<CorpusPaper> papers;
    {
        csv::Reader reader(papers_in);
        csv::expect_header(reader, {"id", "year", "field", "subfield"});
        std::unordered_map<std::string, std::size_t> first_line;
        csv::Record row;
        while (reader.next(row)) {
            if (csv::is_blank(row)) continue;
            if (row.fields.size() != 4) {
                throw ParseError(row.line, "expected 4 columns, found " + std::to_string(row.fields.size()));
            }
            if (row.fields[0].empty()) throw ParseError(row.line, "empty paper id");
            auto [it, fresh] = first_line.emplace(row.fields[0], row.line);
            if (!fresh) {
                throw ParseError(row.line, "duplicate paper id '" + row.fields[0] + "' (first on line " +
                                               std::to_string(it->second) + ")");
            }
            papers.push_back(CorpusPaper{row.fields[0], detail::parse_year(row.fields[1], row.line),
                                         field_from_token(row.fields[2]), row.fields[3]});
        }
    }
    std::vector<std::pair<std::string, std::string>> edges;
    {
        csv::Reader reader(edges_in);
        csv::expect_header(reader, {"src", "dst"});
        csv::Record row;
        while (reader.next(row)) {
            if (csv::is_blank(row)) continue;
            if (row.fields.size() != 2) {
                throw ParseError(row.line, "expected 2 columns, found " + std::to_string(row.fields.size()));
            }
            edges.emplace_back(std::move(row.fields[0]), std::move(row.fields[1]));
        }
    }
    return make_corpus(std::move(papers), edges);
}

inline void write_papers(const Corpus& corpus, std::ostream& out) {
    out << "id,year,field,subfield\n";
    for (const auto& p : corpus.papers) {
        csv::write_row(out, {p.external_id, std::to_string(p.year), std::string(file_token(p.field)), p.subfield});
    }
}

inline void write_edges(const Corpus& corpus, std::ostream& out) {
    out << "src,dst\n";
    for (const auto& e : corpus.edges) {
        csv::write_row(out, {corpus.papers[e.src].external_id, corpus.papers[e.dst].external_id});
    }
}

/// Drops the outgoing edges of every paper citing fewer than `k` papers.
/// Single pass; the papers themselves stay (they remain citable).
inline Corpus filter_min_refs(const Corpus& corpus, std::size_t k) {
    Corpus out = corpus;
    if (k == 0) return out;
    const auto deg = corpus.out_degrees();
    std::erase_if(out.edges, [&](const CorpusEdge& e) { return deg[e.src] < k; });
    return out;
}

/// Loads the papers with year <= last_year (a prefix of the corpus) and the
/// edges among them. The graph's ids equal the corpus ids.
inline CitationGraph build_graph(const Corpus& corpus, Year last_year, YearRange graph_years) {
    CitationGraph graph(graph_years);
    std::size_t count = 0;
    for (const auto& p : corpus.papers) {
        if (p.year > last_year) break;
        graph.add_paper(p.year, p.field, Origin::warmup);
        ++count;
    }
    for (const auto& e : corpus.edges) {
        if (e.src < count && e.dst < count) graph.add_citation(e.src, e.dst);
    }
    return graph;
}

/// Smallest and largest publication year in the corpus.
inline YearRange year_span(const Corpus& corpus) {
    if (corpus.papers.empty()) return {0, -1};
    return {corpus.papers.front().year, corpus.papers.back().year};
}

}  // namespace citeflow
