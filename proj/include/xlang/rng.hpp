#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace xlang {

// Deterministic PRNG with a fully specified algorithm (splitmix64), so the
// same seed yields the same draw sequence on every platform and compiler.
// Standard-library engines are specified too, but their distributions are
// not; all bounded draws here go through floor-division on the raw stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t nextU64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). n must be > 0. Multiply-shift bound reduction.
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(nextU64()) * n) >> 64);
    }

    // Uniform in [lo, hi] inclusive.
    int range(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1)));
    }
    int range(const std::pair<int, int>& r) { return range(r.first, r.second); }

    // True with probability p.
    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        // 53 uniform bits -> double in [0,1)
        double u = static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
        return u < p;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Stream splitting: derive an independent child seed. Used to give each
    // program/mutant its own stream so insertions don't shift later draws.
    static std::uint64_t deriveSeed(std::uint64_t parent, std::uint64_t index) {
        Rng r(parent ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL));
        r.nextU64();
        return r.nextU64();
    }

private:
    std::uint64_t state_;
};

}  // namespace xlang
