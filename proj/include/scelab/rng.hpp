#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace scelab {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_tag(std::string_view tag) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// A seed identifying one random substream. Child streams are derived by
/// index or tag, so results never depend on the order in which streams are
/// consumed.
class Seed {
public:
    constexpr Seed() = default;
    constexpr explicit Seed(std::uint64_t value) noexcept : value_(value) {}

    constexpr std::uint64_t value() const noexcept { return value_; }

    constexpr Seed child(std::uint64_t index) const noexcept
    {
        return Seed{splitmix64(splitmix64(value_) ^ splitmix64(index + 0x632be59bd9b4e019ULL))};
    }
    constexpr Seed child(std::string_view tag) const noexcept { return child(hash_tag(tag)); }

    friend constexpr bool operator==(Seed, Seed) = default;

private:
    std::uint64_t value_ = 0;
};

/// Deterministic random source. The engine is std::mt19937_64 (fully
/// specified by the standard); uniform draws are built on raw engine output
/// so sequences are identical across standard library implementations.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(splitmix64(seed.value())) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Lemire's nearly-divisionless method.
    std::uint64_t below(std::uint64_t n)
    {
        if (n == 0) return 0;
        __uint128_t m = static_cast<__uint128_t>(engine_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<__uint128_t>(engine_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Marsaglia's polar method (no cached spare, so every
    /// call consumes a fresh set of draws).
    double normal()
    {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    template <class RandomIt>
    void shuffle(RandomIt first, RandomIt last)
    {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            using std::swap;
            swap(first[i - 1], first[below(i)]);
        }
    }

    // UniformRandomBitGenerator interface, for interop with <algorithm>.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace scelab
