#pragma once

// graph.csv: one row per citation carrying both endpoints' year and field,
// so signatures can be recomputed from the file alone.

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "citeflow/csv.hpp"
#include "citeflow/error.hpp"
#include "citeflow/field.hpp"
#include "citeflow/graph.hpp"

namespace citeflow {

inline void write_graph_csv(const CitationGraph& graph, std::ostream& out) {
    out << "src,dst,src_year,src_field,dst_year,dst_field\n";
    for (PaperId u = 0; u < graph.size(); ++u) {
        const auto& p = graph.paper(u);
        for (auto v : p.refs) {
            const auto& q = graph.paper(v);
            out << u << ',' << v << ',' << p.year << ',' << file_token(p.field) << ',' << q.year << ','
                << file_token(q.field) << '\n';
        }
    }
}

/// Rebuilds the cited/citing part of a graph from graph.csv. Papers are
/// renumbered in (year, original id) order; isolated papers are not
/// recoverable from an edge list.
inline CitationGraph read_graph_csv(std::istream& in) {
    csv::Reader reader(in);
    csv::expect_header(reader, {"src", "dst", "src_year", "src_field", "dst_year", "dst_field"});
    struct Node {
        Year year;
        Field field;
    };
    std::map<std::uint64_t, Node> nodes;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    auto num = [](const std::string& s, std::size_t line, const char* what) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
        }
        return v;
    };
    auto note = [&](std::uint64_t id, Year y, Field f, std::size_t line) {
        auto [it, fresh] = nodes.emplace(id, Node{y, f});
        if (!fresh && (it->second.year != y || it->second.field != f)) {
            throw ParseError(line, "paper " + std::to_string(id) + " listed with conflicting year or field");
        }
    };
    csv::Record row;
    while (reader.next(row)) {
        if (csv::is_blank(row)) continue;
        if (row.fields.size() != 6) throw ParseError(row.line, "expected 6 columns");
        const auto src = num(row.fields[0], row.line, "src");
        const auto dst = num(row.fields[1], row.line, "dst");
        if (src < 0 || dst < 0) throw ParseError(row.line, "negative paper id");
        note(static_cast<std::uint64_t>(src), static_cast<Year>(num(row.fields[2], row.line, "src_year")),
             field_from_token(row.fields[3]), row.line);
        note(static_cast<std::uint64_t>(dst), static_cast<Year>(num(row.fields[4], row.line, "dst_year")),
             field_from_token(row.fields[5]), row.line);
        edges.emplace_back(src, dst);
    }
    std::vector<std::pair<std::uint64_t, Node>> order(nodes.begin(), nodes.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second.year < b.second.year; });
    YearRange years{0, 0};
    if (!order.empty()) years = {order.front().second.year, order.back().second.year};
    CitationGraph graph(years);
    std::map<std::uint64_t, PaperId> remap;
    for (const auto& [id, node] : order) remap[id] = graph.add_paper(node.year, node.field);
    for (const auto& [s, d] : edges) graph.add_citation(remap.at(s), remap.at(d));
    return graph;
}

/// Checks the graph's bookkeeping; throws InvariantError on the first breach.
inline void audit_graph(const CitationGraph& graph) {
    std::size_t edges = 0;
    std::vector<std::size_t> indeg(graph.size(), 0);
    for (PaperId u = 0; u < graph.size(); ++u) {
        for (auto v : graph.refs(u)) {
            ++indeg[v];
            ++edges;
            if (graph.year(v) > graph.year(u)) {
                throw InvariantError("edge " + std::to_string(u) + " -> " + std::to_string(v) + " points forward in time");
            }
        }
    }
    if (edges != graph.edge_count()) throw InvariantError("edge count mismatch");
    for (PaperId v = 0; v < graph.size(); ++v) {
        if (indeg[v] != graph.in_degree(v) || graph.children(v).size() != graph.in_degree(v)) {
            throw InvariantError("in-degree mismatch at paper " + std::to_string(v));
        }
        if (graph.stored_weight(v) != graph.in_degree(v) + 1) {
            throw InvariantError("sampling weight mismatch at paper " + std::to_string(v));
        }
    }
}

}  // namespace citeflow
