#pragma once

// Portable random streams. Every draw goes through next_u64() so that a run is
// fully determined by its seed on any platform (no std:: distributions, whose
// output is implementation-defined).

#include <concepts>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace citeflow {

template <class R>
concept RandomSource = requires(R& r) {
    { r.next_u64() } -> std::same_as<std::uint64_t>;
};

class Random {
public:
    explicit Random(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Replays a fixed sequence of raw draws; throws once the script is exhausted.
class ScriptedRandom {
public:
    explicit ScriptedRandom(std::vector<std::uint64_t> script) : script_(std::move(script)) {}

    std::uint64_t next_u64() {
        if (cursor_ >= script_.size()) throw std::out_of_range("scripted random stream exhausted");
        return script_[cursor_++];
    }

    std::size_t consumed() const noexcept { return cursor_; }
    std::size_t remaining() const noexcept { return script_.size() - cursor_; }

private:
    std::vector<std::uint64_t> script_;
    std::size_t cursor_ = 0;
};

/// Forwards to an inner source and keeps a copy of every draw.
template <RandomSource Inner>
class RecordingRandom {
public:
    explicit RecordingRandom(Inner& inner) : inner_(inner) {}

    std::uint64_t next_u64() {
        auto x = inner_.next_u64();
        tape_.push_back(x);
        return x;
    }

    const std::vector<std::uint64_t>& tape() const noexcept { return tape_; }

private:
    Inner& inner_;
    std::vector<std::uint64_t> tape_;
};

/// Counts draws without recording them.
template <RandomSource Inner>
class CountingRandom {
public:
    explicit CountingRandom(Inner& inner) : inner_(inner) {}

    std::uint64_t next_u64() {
        ++count_;
        return inner_.next_u64();
    }

    std::size_t count() const noexcept { return count_; }

private:
    Inner& inner_;
    std::size_t count_ = 0;
};

/// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
/// For a raw draw x the unrejected result is floor(x * bound / 2^64).
template <RandomSource R>
std::uint64_t uniform_below(R& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    auto product = static_cast<unsigned __int128>(rng.next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(rng.next_u64()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

/// Uniform real in [0, 1) with 53 bits of precision.
template <RandomSource R>
double uniform01(R& rng) {
    return static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
}

/// One draw, true with probability p.
template <RandomSource R>
bool bernoulli(R& rng, double p) {
    return uniform01(rng) < p;
}

/// Raw draw that makes uniform01 return q (to 53 bits) and uniform_below(n)
/// return floor(q * n). Scripts should use cell midpoints such as
/// (k + 0.5) / n so truncation never lands on a boundary.
constexpr std::uint64_t draw_at(double q) {
    return static_cast<std::uint64_t>(q * 0x1.0p53) << 11;
}

template <RandomSource R, class T>
void shuffle(R& rng, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(uniform_below(rng, i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace citeflow
