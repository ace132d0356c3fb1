#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace towbombe {

using RandomStream = std::mt19937_64;

// SplitMix64 step. Used for seed derivation only, never as a run generator.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream splitting scheme: stream `index` under `master` is seeded with
// splitmix64(master ^ splitmix64(index + 1)). Monte Carlo sample s owns
// derive_seed(master_seed, s); sub-streams inside one trajectory (channel
// draws, per-user policies) derive from the sample seed the same way.
// Sample results therefore never depend on scheduling or thread count.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

inline RandomStream derive_stream(std::uint64_t master, std::uint64_t index) {
    return RandomStream(derive_seed(master, index));
}

// Index of the largest value; exact ties are broken uniformly at random.
// Consumes randomness only when a tie actually occurs.
inline int argmax_tiebreak(const std::vector<double>& values, RandomStream& rng) {
    int best = 0;
    int ties = 1;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[i] > values[best]) {
            best = i;
            ties = 1;
        } else if (values[i] == values[best]) {
            ++ties;
        }
    }
    if (ties == 1) return best;
    std::uniform_int_distribution<int> pick(0, ties - 1);
    int want = pick(rng);
    for (int i = best, seen = 0; i < static_cast<int>(values.size()); ++i) {
        if (values[i] == values[best] && seen++ == want) return i;
    }
    return best;
}

}  // namespace towbombe
