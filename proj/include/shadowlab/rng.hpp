#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace shadowlab {

/// Counter-based generator (Philox 4x64, 10 rounds). The key is
/// (seed, stream_id), so distinct streams are independent by construction
/// and a stream's output depends only on (seed, stream_id, draw index) --
/// bit-exact reproducibility regardless of scheduling.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id), block_(0), pos_(4) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = block(block_++, seed_, stream_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log argument.
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Box-Muller pair of independent N(0,1) deviates.
    std::array<double, 2> gauss_pair() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// Standard complex Gaussian (real and imaginary parts each N(0,1)).
    std::complex<double> gauss_complex() {
        const auto g = gauss_pair();
        return {g[0], g[1]};
    }

    /// One Philox4x64-10 block; exposed for the known-answer test.
    static std::array<std::uint64_t, 4> block(std::uint64_t counter, std::uint64_t key0,
                                              std::uint64_t key1) {
        constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ull;
        constexpr std::uint64_t M1 = 0xCA5A826395121157ull;
        constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ull;
        constexpr std::uint64_t W1 = 0xBB67AE8584CAA73Bull;

        std::uint64_t c0 = counter, c1 = 0, c2 = 0, c3 = 0;
        std::uint64_t k0 = key0, k1 = key1;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 p0 = static_cast<unsigned __int128>(M0) * c0;
            const unsigned __int128 p1 = static_cast<unsigned __int128>(M1) * c2;
            const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
            const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
            const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
            const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += W0;
            k1 += W1;
        }
        return {c0, c1, c2, c3};
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_;
    std::array<std::uint64_t, 4> buf_{};
    int pos_;
};

}  // namespace shadowlab
