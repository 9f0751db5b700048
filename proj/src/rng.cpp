#include "causaldna/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causaldna {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::uniform_below: n must be positive.");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

double Rng::gaussian() {
    if (spare_valid_) {
        spare_valid_ = false;
        return spare_;
    }
    double u1, u2;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    spare_valid_ = true;
    return r * std::cos(theta);
}

std::vector<int> Rng::permutation(int n) {
    if (n < 0) throw std::invalid_argument("Rng::permutation: n must be nonnegative.");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<int>(uniform_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

std::vector<int> Rng::weighted_sample_without_replacement(const std::vector<double>& weights, int k) {
    auto n = static_cast<int>(weights.size());
    if (k < 0 || k > n)
        throw std::invalid_argument("Rng::weighted_sample_without_replacement: k out of range.");
    std::vector<double> w(weights);
    std::vector<int> chosen;
    chosen.reserve(k);
    for (int draw = 0; draw < k; ++draw) {
        double total = std::accumulate(w.begin(), w.end(), 0.0);
        if (total <= 0.0)
            throw std::invalid_argument(
                "Rng::weighted_sample_without_replacement: weights sum to zero.");
        double target = uniform01() * total;
        double acc = 0.0;
        int pick = -1;
        for (int i = 0; i < n; ++i) {
            acc += w[i];
            if (w[i] > 0.0 && target < acc) {
                pick = i;
                break;
            }
        }
        if (pick < 0) {
            for (int i = n - 1; i >= 0; --i) {
                if (w[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        chosen.push_back(pick);
        w[pick] = 0.0;
    }
    return chosen;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
        h *= 0xbf58476d1ce4e5b9ULL;
        h ^= h >> 32;
    };
    mix(base);
    mix(replicate + 0x9e3779b97f4a7c15ULL);
    for (char c : tag) mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    h ^= h >> 31;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

}  // namespace causaldna
