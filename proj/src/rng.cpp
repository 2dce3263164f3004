#include "bmdisc/rng.hpp"

#include <cmath>
#include <limits>

namespace bmdisc {

namespace {

// Philox-4x64 round constants (multipliers and Weyl key increments).
constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) noexcept {
    const unsigned __int128 p =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t shard_index) noexcept
    : key_{seed, shard_index},
      counter_{0, 0, 0, 0},
      block_{0, 0, 0, 0},
      block_pos_(4),
      spare_normal_(std::numeric_limits<double>::quiet_NaN()),
      has_spare_(false) {}

void Stream::fill_block() noexcept {
    std::uint64_t c0 = counter_[0];
    std::uint64_t c1 = counter_[1];
    std::uint64_t c2 = counter_[2];
    std::uint64_t c3 = counter_[3];
    std::uint64_t k0 = key_[0];
    std::uint64_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0;
        std::uint64_t lo0;
        std::uint64_t hi1;
        std::uint64_t lo1;
        mulhilo(kM0, c0, hi0, lo0);
        mulhilo(kM1, c2, hi1, lo1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += kW0;
        k1 += kW1;
    }
    block_[0] = c0;
    block_[1] = c1;
    block_[2] = c2;
    block_[3] = c3;
    // 256-bit counter increment; the low word alone spans 2^64 blocks.
    if (++counter_[0] == 0 && ++counter_[1] == 0 && ++counter_[2] == 0) {
        ++counter_[3];
    }
    block_pos_ = 0;
}

std::uint64_t Stream::next_u64() noexcept {
    if (block_pos_ >= 4) {
        fill_block();
    }
    return block_[block_pos_++];
}

Stream create_stream(std::uint64_t seed, std::uint64_t shard_index) noexcept {
    return Stream(seed, shard_index);
}

double sample_uniform(Stream& s) noexcept {
    const std::uint64_t bits = s.next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double sample_normal(Stream& s, double mu, double sigma) {
    if (sigma < 0.0 || !std::isfinite(sigma) || !std::isfinite(mu)) {
        throw invalid_parameter("sample_normal: sigma must be finite and >= 0");
    }
    if (sigma == 0.0) {
        return mu;
    }
    if (s.has_spare_) {
        s.has_spare_ = false;
        return mu + sigma * s.spare_normal_;
    }
    double u;
    double v;
    double r2;
    do {
        u = 2.0 * sample_uniform(s) - 1.0;
        v = 2.0 * sample_uniform(s) - 1.0;
        r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(r2) / r2);
    s.spare_normal_ = v * factor;
    s.has_spare_ = true;
    return mu + sigma * (u * factor);
}

double sample_inverse_gaussian(Stream& s, double mean, double shape) {
    if (!(mean > 0.0) || !(shape > 0.0) || !std::isfinite(mean) ||
        !std::isfinite(shape)) {
        throw invalid_parameter(
            "sample_inverse_gaussian: mean and shape must be finite and > 0");
    }
    const double z = sample_normal(s, 0.0, 1.0);
    const double w = mean * z * z;
    // Smaller root of the quadratic, rationalized: stays in (0, mean].
    const double x =
        w == 0.0 ? mean
                 : mean * (1.0 -
                           2.0 * w / (w + std::sqrt(w * (w + 4.0 * shape))));
    const double u = sample_uniform(s);
    return u < mean / (mean + x) ? x : mean * mean / x;
}

}  // namespace bmdisc
