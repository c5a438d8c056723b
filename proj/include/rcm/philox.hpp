#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace rcm {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (key, counter), so any variate can be addressed directly
// without carrying generator state between particles, pairs or threads.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept
    {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

// Stream tags are FNV-1a hashes of short names ("cloud", "edge", ...).
constexpr std::uint32_t stream_id(std::string_view name) noexcept
{
    std::uint32_t h = 2166136261u;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619u;
    }
    return h;
}

namespace streams {
inline constexpr std::uint32_t kCount = stream_id("count");
inline constexpr std::uint32_t kCloud = stream_id("cloud");
inline constexpr std::uint32_t kPalm = stream_id("palm");
inline constexpr std::uint32_t kEdge = stream_id("edge");
inline constexpr std::uint32_t kReplica = stream_id("replica");
inline constexpr std::uint32_t kSite = stream_id("site");
inline constexpr std::uint32_t kBond = stream_id("bond");
inline constexpr std::uint32_t kSynthetic = stream_id("synthetic");
} // namespace streams

// Keyed access to Philox output: (seed) is the key, (stream, a, b, block)
// the counter.
class CounterRng {
public:
    constexpr explicit CounterRng(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
    {
    }

    constexpr Philox4x32::Counter block(std::uint32_t stream, std::uint32_t a, std::uint32_t b,
                                        std::uint32_t block_index = 0) const noexcept
    {
        return Philox4x32::apply({a, b, stream, block_index}, key_);
    }

    constexpr std::uint64_t bits64(std::uint32_t stream, std::uint32_t a, std::uint32_t b,
                                   std::uint32_t slot = 0) const noexcept
    {
        const auto out = block(stream, a, b, slot / 2);
        const std::size_t h = 2 * (slot % 2);
        return (std::uint64_t{out[h]} << 32) | out[h + 1];
    }

    // Uniform on the open interval (0, 1) with 53 random bits.
    constexpr double uniform(std::uint32_t stream, std::uint32_t a, std::uint32_t b,
                             std::uint32_t slot = 0) const noexcept
    {
        return to_open_unit(bits64(stream, a, b, slot));
    }

    static constexpr double to_open_unit(std::uint64_t bits) noexcept
    {
        return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
    }

    constexpr std::uint64_t seed() const noexcept
    {
        return (std::uint64_t{key_[1]} << 32) | key_[0];
    }

private:
    Philox4x32::Key key_;
};

// Seed for replica `index` of an experiment keyed by `seed`.
constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return CounterRng(seed).bits64(streams::kReplica, static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32));
}

} // namespace rcm
