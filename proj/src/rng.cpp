#include "capkit/rng.hpp"

#include <cmath>
#include <numbers>

#include "capkit/errors.hpp"

namespace capkit {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    return static_cast<std::uint64_t>(p);
}

// SplitMix64 finalizer; used only to decorrelate derived stream ids.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

SeedSpec SeedSpec::derived(std::uint64_t item) const {
    return SeedSpec{root_seed, mix64(stream_id ^ mix64(item))};
}

std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           std::uint64_t key0, std::uint64_t key1) {
    std::array<std::uint64_t, 4> c = counter;
    std::uint64_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        std::uint64_t hi0, hi1;
        const std::uint64_t lo0 = mulhilo(kPhiloxM0, c[0], hi0);
        const std::uint64_t lo1 = mulhilo(kPhiloxM1, c[2], hi1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    }
    return c;
}

RandomStream::RandomStream(SeedSpec seed) : seed_(seed) {}

void RandomStream::refill() {
    block_ = philox4x64_10(counter_, seed_.root_seed, seed_.stream_id);
    block_pos_ = 0;
    for (int i = 0; i < 4; ++i) {
        if (++counter_[i] != 0) break;  // 256-bit increment with carry
    }
}

std::uint64_t RandomStream::next_u64() {
    if (block_pos_ == 4) refill();
    return block_[block_pos_++];
}

double RandomStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::next_index(std::uint64_t n) {
    if (n == 0) throw DomainError("next_index: n must be positive");
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RandomStream::next_normal() {
    if (cached_normal_) {
        const double z = *cached_normal_;
        cached_normal_.reset();
        return z;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    return r * std::cos(theta);
}

}  // namespace capkit
