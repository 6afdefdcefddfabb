#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "citeflow/citeflow.hpp"

namespace support {

using namespace citeflow;

struct Node {
    Year year;
    Field field;
    std::vector<PaperId> refs{};
};

/// Papers in the given order, then every listed reference.
inline CitationGraph make_graph(const std::vector<Node>& nodes, YearRange years = {1990, 2030}) {
    CitationGraph g(years);
    for (const auto& n : nodes) g.add_paper(n.year, n.field);
    for (PaperId u = 0; u < nodes.size(); ++u) {
        for (auto v : nodes[u].refs) g.add_citation(u, v);
    }
    return g;
}

inline EmpiricalStats stats_with(Field src, FieldDistribution dist) {
    EmpiricalStats s;
    s.dest_field_dist[index_of(src)] = dist;
    return s;
}

inline EmpiricalStats point_stats(Field src, Field dst) {
    FieldDistribution d{};
    d[index_of(dst)] = 1.0;
    return stats_with(src, d);
}

/// Plays a fixed script, then continues with a seeded generator.
class ScriptThenRandom {
public:
    ScriptThenRandom(std::vector<std::uint64_t> script, std::uint64_t seed) : script_(std::move(script)), rng_(seed) {}
    std::uint64_t next_u64() {
        if (pos_ < script_.size()) return script_[pos_++];
        return rng_.next_u64();
    }
    std::size_t consumed() const { return pos_; }

private:
    std::vector<std::uint64_t> script_;
    std::size_t pos_ = 0;
    Random rng_;
};

inline Corpus corpus_from_text(const std::string& papers, const std::string& edges) {
    std::istringstream p(papers), e(edges);
    return load_corpus(p, e);
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("citeflow_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Random graph with papers in year order: `n` papers over `years`, each
/// citing up to `max_refs` uniformly chosen earlier-or-same-year papers.
template <class R>
CitationGraph random_graph(R& rng, std::size_t n, std::size_t max_refs, YearRange years = {1995, 2017},
                           bool include_other = false) {
    std::vector<Year> ys(n);
    for (auto& y : ys) y = years.first + static_cast<Year>(uniform_below(rng, years.last - years.first + 1));
    std::sort(ys.begin(), ys.end());
    CitationGraph g(years);
    for (auto y : ys) {
        const auto f = static_cast<Field>(uniform_below(rng, include_other ? 4 : 3));
        g.add_paper(y, f);
    }
    for (PaperId u = 1; u < n; ++u) {
        const auto k = uniform_below(rng, max_refs + 1);
        for (std::size_t i = 0; i < k; ++i) {
            const auto v = static_cast<PaperId>(uniform_below(rng, u));
            if (std::find(g.refs(u).begin(), g.refs(u).end(), v) == g.refs(u).end()) g.add_citation(u, v);
        }
    }
    return g;
}

}  // namespace support
