/*
   Copyright 2026 The ctid Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each
// (key, stream, path) triple owns an independent sequence, so paths can be
// simulated in any order on any number of workers.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

namespace ctid {

class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint32_t stream, std::uint64_t path) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0U, stream, static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == kBuffered) refill();
    return buf_[pos_++];
  }

  /// Uniform on (0, 1).
  double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// The raw 10-round bijection.
  static counter_type bijection(counter_type c, key_type k) noexcept {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return c;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53U;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

  static constexpr std::size_t kBlocks = 8;
  static constexpr std::size_t kBuffered = 2 * kBlocks;

  // Independent blocks side by side so the rounds interleave.
#if defined(__SSE2__)
  // Two blocks per register, one 32-bit word in the low half of each 64-bit lane.
  void refill() noexcept {
    constexpr std::size_t kPairs = kBlocks / 2;
    __m128i c0[kPairs], c1[kPairs], c2[kPairs], c3[kPairs];
    for (std::size_t p = 0; p < kPairs; ++p) {
      const auto b = static_cast<std::uint32_t>(2 * p);
      c0[p] = _mm_set_epi64x(ctr_[0] + b + 1U, ctr_[0] + b);
      c1[p] = _mm_set1_epi64x(ctr_[1]);
      c2[p] = _mm_set1_epi64x(ctr_[2]);
      c3[p] = _mm_set1_epi64x(ctr_[3]);
    }
    const __m128i m0 = _mm_set1_epi64x(kMul0);
    const __m128i m1 = _mm_set1_epi64x(kMul1);
    key_type k = key_;
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      const __m128i k0 = _mm_set1_epi64x(k[0]);
      const __m128i k1 = _mm_set1_epi64x(k[1]);
      for (std::size_t p = 0; p < kPairs; ++p) {
        const __m128i p0 = _mm_mul_epu32(c0[p], m0);
        const __m128i p1 = _mm_mul_epu32(c2[p], m1);
        c0[p] = _mm_xor_si128(_mm_xor_si128(_mm_srli_epi64(p1, 32), c1[p]), k0);
        c2[p] = _mm_xor_si128(_mm_xor_si128(_mm_srli_epi64(p0, 32), c3[p]), k1);
        c1[p] = p1;
        c3[p] = p0;
      }
    }
    const __m128i low = _mm_set1_epi64x(0xffffffffLL);
    for (std::size_t p = 0; p < kPairs; ++p) {
      const __m128i w01 = _mm_or_si128(_mm_slli_epi64(c1[p], 32), _mm_and_si128(c0[p], low));
      const __m128i w23 = _mm_or_si128(_mm_slli_epi64(c3[p], 32), _mm_and_si128(c2[p], low));
      buf_[4 * p] = static_cast<std::uint64_t>(_mm_cvtsi128_si64(w01));
      buf_[4 * p + 1] = static_cast<std::uint64_t>(_mm_cvtsi128_si64(w23));
      buf_[4 * p + 2] = static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(w01, w01)));
      buf_[4 * p + 3] = static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(w23, w23)));
    }
    ctr_[0] += static_cast<std::uint32_t>(kBlocks);
    pos_ = 0;
  }
#else
  void refill() noexcept {
    std::array<std::uint32_t, kBlocks> c0, c1, c2, c3;
    for (std::size_t b = 0; b < kBlocks; ++b) {
      c0[b] = ctr_[0] + static_cast<std::uint32_t>(b);
      c1[b] = ctr_[1];
      c2[b] = ctr_[2];
      c3[b] = ctr_[3];
    }
    key_type k = key_;
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      for (std::size_t b = 0; b < kBlocks; ++b) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0[b];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2[b];
        const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[b] ^ k[0];
        const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[b] ^ k[1];
        c1[b] = static_cast<std::uint32_t>(p1);
        c3[b] = static_cast<std::uint32_t>(p0);
        c0[b] = n0;
        c2[b] = n2;
      }
    }
    for (std::size_t b = 0; b < kBlocks; ++b) {
      buf_[2 * b] = (static_cast<std::uint64_t>(c1[b]) << 32) | c0[b];
      buf_[2 * b + 1] = (static_cast<std::uint64_t>(c3[b]) << 32) | c2[b];
    }
    ctr_[0] += static_cast<std::uint32_t>(kBlocks);
    pos_ = 0;
  }
#endif

  key_type key_;
  counter_type ctr_;
  std::array<std::uint64_t, kBuffered> buf_{};
  std::size_t pos_ = kBuffered;
};

}  // namespace ctid
