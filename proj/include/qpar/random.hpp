#pragma once

// Deterministic sampling utilities. Every stochastic entry point in the
// library takes an explicit 64-bit seed; identical seeds reproduce identical
// streams bit-for-bit (mt19937_64 output is fully specified by the standard,
// and we derive doubles from it directly instead of going through
// distribution objects, whose output is implementation-defined).

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qpar {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1), built from the top 53 bits of the generator.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Index drawn from a non-negative weight vector (need not be normalized).
    int sample(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("Rng::sample: negative weight");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("Rng::sample: all weights zero");
        double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Stream-splitting rule for parallel tasks: task k of a run seeded with s
/// draws from split_seed(s, k). Distinct tasks get decorrelated streams and
/// the mapping is stable across runs.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t task_index) {
    return detail::splitmix64(seed ^ detail::splitmix64(task_index + 1));
}

/// shots independent draws from a probability vector, returned as counts.
inline std::vector<std::int64_t> sample_counts(const std::vector<double>& probs,
                                               std::int64_t shots, Rng& rng) {
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (std::int64_t s = 0; s < shots; ++s) counts[static_cast<std::size_t>(rng.sample(probs))]++;
    return counts;
}

}  // namespace qpar
