#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace bftcup {

/// Seeded generator with draw helpers whose results do not depend on the
/// standard library's distribution implementations, so runs replay
/// identically across toolchains.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : mEngine(seed) {}

    std::uint64_t next() { return mEngine(); }

    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) { return mEngine() % bound; }

    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    bool chance(double p) { return static_cast<double>(mEngine() >> 11) * 0x1.0p-53 < p; }

    template <typename T>
    void
    shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
        {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    template <typename T>
    T const&
    pick(std::vector<T> const& v)
    {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 mEngine;
};

} // namespace bftcup
