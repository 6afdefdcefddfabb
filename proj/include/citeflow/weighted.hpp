#pragma once

// Dynamic integer-weighted sampling. A growable Fenwick tree gives O(log n)
// append, point update, prefix sum and inverse-prefix search, which is what
// preferential attachment over a growing population needs.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "citeflow/random.hpp"

namespace citeflow {

class FenwickTree {
public:
    using weight_type = std::uint64_t;

    std::size_t size() const noexcept { return tree_.size() - 1; }

    void push_back(weight_type w) {
        const std::size_t i = tree_.size();  // 1-based index of the new slot
        const std::size_t lsb = i & (~i + 1);
        tree_.push_back(w + prefix(i - 1) - prefix(i - lsb));
        values_.push_back(w);
    }

    void set(std::size_t pos, weight_type w) {
        const weight_type old = values_.at(pos);
        values_[pos] = w;
        if (w >= old) {
            add(pos, w - old);
        } else {
            sub(pos, old - w);
        }
    }

    weight_type value(std::size_t pos) const { return values_.at(pos); }

    /// Sum of the first `count` weights.
    weight_type prefix(std::size_t count) const {
        weight_type s = 0;
        for (std::size_t i = count; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

    weight_type total() const { return prefix(size()); }

    /// Smallest position p with prefix(p + 1) > target. Requires target < total().
    std::size_t find(weight_type target) const {
        std::size_t pos = 0;
        const std::size_t n = size();
        for (std::size_t step = n == 0 ? 0 : std::bit_floor(n); step > 0; step >>= 1) {
            const std::size_t next = pos + step;
            if (next <= n && tree_[next] <= target) {
                pos = next;
                target -= tree_[next];
            }
        }
        return pos;
    }

private:
    void add(std::size_t pos, weight_type delta) {
        for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
    }
    void sub(std::size_t pos, weight_type delta) {
        for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] -= delta;
    }

    std::vector<weight_type> tree_{0};
    std::vector<weight_type> values_;
};

/// Draws a position in [0, count) with probability proportional to weight.
template <RandomSource R>
std::size_t sample_prefix(const FenwickTree& tree, std::size_t count, R& rng) {
    const auto total = tree.prefix(count);
    if (total == 0) throw std::logic_error("sample_prefix: zero total weight");
    return tree.find(uniform_below(rng, total));
}

/// A set of ids with mutable positive weights, sampled proportionally.
/// Membership order is insertion order.
template <class Id>
class WeightedSet {
public:
    bool contains(Id id) const { return slot_.contains(id); }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    const std::vector<Id>& members() const noexcept { return members_; }

    /// Returns false if already present.
    bool insert(Id id, std::uint64_t weight) {
        auto [it, fresh] = slot_.try_emplace(id, members_.size());
        if (!fresh) return false;
        members_.push_back(id);
        tree_.push_back(weight);
        return true;
    }

    void set_weight(Id id, std::uint64_t weight) { tree_.set(slot_.at(id), weight); }
    std::uint64_t weight(Id id) const { return tree_.value(slot_.at(id)); }
    std::uint64_t total() const { return tree_.total(); }

    template <RandomSource R>
    Id sample(R& rng) const {
        if (members_.empty()) throw std::logic_error("WeightedSet::sample on empty set");
        return members_[sample_prefix(tree_, members_.size(), rng)];
    }

private:
    std::vector<Id> members_;
    std::unordered_map<Id, std::size_t> slot_;
    FenwickTree tree_;
};

}  // namespace citeflow
