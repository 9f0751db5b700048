#ifndef CAUSALDNA_RNG_HPP
#define CAUSALDNA_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace causaldna {

// Deterministic pseudo-random generator. std::mt19937_64 output is specified
// bit-exactly by the standard; the distributions below are implemented by hand
// because the std::*_distribution classes are not portable across library
// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed), spare_valid_(false) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform over {0, ..., n-1} by rejection.
    std::uint64_t uniform_below(std::uint64_t n);

    bool bernoulli(double prob) { return uniform01() < prob; }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double gaussian();

    // Fisher-Yates shuffle of {0, ..., n-1}.
    std::vector<int> permutation(int n);

    // Draws k distinct indices in {0, ..., n-1} with probability proportional
    // to the given nonnegative weights, without replacement.
    std::vector<int> weighted_sample_without_replacement(const std::vector<double>& weights, int k);

private:
    std::mt19937_64 gen_;
    double spare_;
    bool spare_valid_;
};

// Mixes a base seed with a replicate index and a purpose tag so that every
// consumer of randomness in an experiment gets an independent stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate, std::string_view tag);

}  // namespace causaldna

#endif  // CAUSALDNA_RNG_HPP
