#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace capkit {

/// Identifies one reproducible random stream. The same (root_seed, stream_id)
/// pair yields a byte-identical sequence on every platform.
struct SeedSpec {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_id = 0;

    /// Derive a child stream for an independent work item (bootstrap
    /// resample, Monte Carlo replication, dimension index, ...). Children of
    /// distinct items are distinct streams, so parallel scheduling cannot
    /// change results.
    [[nodiscard]] SeedSpec derived(std::uint64_t item) const;
};

/// Name of the generator, recorded in report provenance.
inline constexpr const char* kRngAlgorithm = "philox4x64-10";

/// Counter-based Philox4x64-10 stream (Salmon et al. 2011). The key is
/// (root_seed, stream_id); distinct keys give statistically independent
/// streams, and the 256-bit counter never wraps at any realistic draw count.
class RandomStream {
public:
    explicit RandomStream(SeedSpec seed);

    /// Next raw 64-bit word.
    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_uniform();

    /// Uniform integer in [0, n), n > 0. Fixed-point multiply; bias is
    /// O(n / 2^64) and identical on every platform.
    std::uint64_t next_index(std::uint64_t n);

    /// Standard normal deviate (Box-Muller, trigonometric form; second
    /// deviate of each pair is cached).
    double next_normal();

    /// Normal(mean, sd) deviate.
    double next_normal(double mean, double sd) { return mean + sd * next_normal(); }

    [[nodiscard]] SeedSpec seed() const { return seed_; }

private:
    void refill();

    SeedSpec seed_;
    std::array<std::uint64_t, 4> counter_{};
    std::array<std::uint64_t, 4> block_{};
    int block_pos_ = 4;  // forces refill on first draw
    std::optional<double> cached_normal_;
};

/// Encrypt one Philox4x64-10 block. Exposed for known-answer tests.
std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           std::uint64_t key0, std::uint64_t key1);

}  // namespace capkit
