#pragma once

#include <cstdint>
#include <random>

namespace mvcg {

/// Deterministic random stream. All draws go through explicit helpers so a
/// replay with the same seed reproduces every sample bit-exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n). Uses the high bits of a 128-bit product.
    int uniform_int(int n) {
        const auto x = gen_();
        return static_cast<int>((static_cast<unsigned __int128>(x) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

    std::uint64_t raw() { return gen_(); }

    /// Derives an independent child seed (splitmix64 finalizer over base ^ stream).
    static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
        std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace mvcg
