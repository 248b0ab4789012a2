/*
 * Copyright 2026 The cpcorr authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CPCORR_RNG_HPP
#define CPCORR_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace cpcorr {

namespace detail {

inline void philox_mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = std::uint64_t(a) * b;
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

}  // namespace detail

/// Philox4x32-10 counter block cipher.  A (key, counter) pair maps to four
/// 32-bit words; identical inputs give identical outputs on every platform,
/// which is what makes (seed, stream, index)-addressed sampling reproducible.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key,
                                               std::array<std::uint32_t, 4> ctr) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::philox_mulhilo(M0, ctr[0], hi0, lo0);
        detail::philox_mulhilo(M1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

/// A deterministic random stream addressed by (seed, stream id, index).
/// Draws are a pure function of the address and the draw position.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint32_t stream_id, std::uint64_t index)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32) ^ stream_id},
          base_{std::uint32_t(index), std::uint32_t(index >> 32), 0, 0} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return block_[pos_++];
    }

    /// Uniform on (0, 1]; never returns 0, so logs are safe.
    double next_uniform() {
        std::uint64_t hi = next_u32(), lo = next_u32();
        std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return double(bits + 1) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_uniform(), u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925287 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Standard complex Gaussian: E|z|^2 = 1.
    std::complex<double> next_complex_gaussian() {
        constexpr double s = 0.7071067811865476;  // 1/sqrt(2)
        double re = next_gaussian() * s;
        double im = next_gaussian() * s;
        return {re, im};
    }

  private:
    void refill() {
        block_ = philox4x32(key_, {base_[0], base_[1], counter_, 0});
        ++counter_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::uint32_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace cpcorr

#endif
