#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hcpforge {

/// splitmix64 finalizer; used to turn structured keys into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive stable hash of seeds and strings. Identical on every
/// platform, unlike std::hash.
class SeedHasher {
public:
    explicit SeedHasher(std::uint64_t seed = 0) noexcept : state_(mix64(seed)) {}

    SeedHasher& add(std::uint64_t value) noexcept
    {
        state_ = mix64(state_ ^ mix64(value + 0x632be59bd9b4e019ULL));
        return *this;
    }

    SeedHasher& add(std::string_view text) noexcept
    {
        // FNV-1a over the bytes, then folded in with the length.
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : text) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return add(h).add(static_cast<std::uint64_t>(text.size()));
    }

    std::uint64_t value() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Seeded generator passed explicitly wherever randomness is needed.
///
/// The engine is std::mt19937_64 (fully specified by the standard); the
/// distributions are written out here because the standard library ones are
/// implementation-defined and would make instances differ between toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    long long between(long long lo, long long hi)
    {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace hcpforge
