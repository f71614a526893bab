// Copyright 2026 The egta-ps Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "egta/kernels.hpp"

#include <bit>

#include "egta/rng.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace egta::kernels {
namespace {

// Masks the head word so that only bits >= (begin & 63) survive, and the
// tail word so that only bits < (end & 63) survive (end & 63 == 0 keeps all).
inline std::uint64_t HeadMask(std::uint64_t begin) {
  return ~0ULL << (begin & 63);
}
inline std::uint64_t TailMask(std::uint64_t end) {
  const std::uint64_t k = end & 63;
  return k == 0 ? ~0ULL : ~0ULL >> (64 - k);
}

}  // namespace

std::uint64_t PopcountBitsScalar(std::uint64_t key, std::uint64_t begin,
                                 std::uint64_t end) {
  if (begin >= end) return 0;
  const std::uint64_t w0 = begin >> 6;
  const std::uint64_t w1 = (end - 1) >> 6;
  std::uint64_t acc = 0;
  for (std::uint64_t w = w0; w <= w1; ++w) {
    std::uint64_t bits = rng::StreamWord(key, w);
    if (w == w0) bits &= HeadMask(begin);
    if (w == w1) bits &= TailMask(end);
    acc += static_cast<std::uint64_t>(std::popcount(bits));
  }
  return acc;
}

#if defined(__x86_64__) || defined(__i386__)

namespace {

__attribute__((target("avx2")))
inline __m256i Mullo64(__m256i a, std::uint64_t b) {
  // 64x64 -> low 64 multiply from 32x32->64 pieces; the b_hi*a_hi term
  // only affects bits >= 64 and is dropped.
  const __m256i bv = _mm256_set1_epi64x(static_cast<long long>(b));
  const __m256i lo = _mm256_mul_epu32(a, bv);
  const __m256i ah = _mm256_srli_epi64(a, 32);
  const __m256i bh = _mm256_srli_epi64(bv, 32);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(ah, bv), _mm256_mul_epu32(a, bh));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

__attribute__((target("avx2")))
inline __m256i Mix64x4(__m256i z) {
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = Mullo64(z, 0xBF58476D1CE4E5B9ULL);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = Mullo64(z, 0x94D049BB133111EBULL);
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
  return z;
}

}  // namespace

__attribute__((target("avx2,popcnt")))
std::uint64_t PopcountBitsAvx2(std::uint64_t key, std::uint64_t begin,
                               std::uint64_t end) {
  if (begin >= end) return 0;
  const std::uint64_t w0 = begin >> 6;
  const std::uint64_t w1 = (end - 1) >> 6;

  std::uint64_t acc = 0;
  std::uint64_t w = w0;
  // Partial head word.
  if ((begin & 63) != 0 || w0 == w1) {
    std::uint64_t bits = rng::StreamWord(key, w0) & HeadMask(begin);
    if (w0 == w1) bits &= TailMask(end);
    acc += static_cast<std::uint64_t>(std::popcount(bits));
    if (w0 == w1) return acc;
    w = w0 + 1;
  }
  const bool tail_partial = (end & 63) != 0;
  const std::uint64_t w_full_end = tail_partial ? w1 : w1 + 1;  // exclusive

  // Full words, 4 per iteration. State for word i is key + (i+1)*golden;
  // the counter term needs no 64-bit multiply, only a stride add.
  if (w + 4 <= w_full_end) {
    const std::uint64_t g = rng::kGolden;
    __m256i state = _mm256_set_epi64x(
        static_cast<long long>(key + (w + 4) * g),
        static_cast<long long>(key + (w + 3) * g),
        static_cast<long long>(key + (w + 2) * g),
        static_cast<long long>(key + (w + 1) * g));
    const __m256i stride = _mm256_set1_epi64x(static_cast<long long>(4 * g));
    alignas(32) std::uint64_t lanes[4];
    for (; w + 4 <= w_full_end; w += 4) {
      _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), Mix64x4(state));
      acc += static_cast<std::uint64_t>(_mm_popcnt_u64(lanes[0]));
      acc += static_cast<std::uint64_t>(_mm_popcnt_u64(lanes[1]));
      acc += static_cast<std::uint64_t>(_mm_popcnt_u64(lanes[2]));
      acc += static_cast<std::uint64_t>(_mm_popcnt_u64(lanes[3]));
      state = _mm256_add_epi64(state, stride);
    }
  }
  for (; w < w_full_end; ++w) {
    acc += static_cast<std::uint64_t>(
        _mm_popcnt_u64(rng::StreamWord(key, w)));
  }
  // Partial tail word.
  if (tail_partial && w1 >= w) {
    acc += static_cast<std::uint64_t>(
        _mm_popcnt_u64(rng::StreamWord(key, w1) & TailMask(end)));
  }
  return acc;
}

#endif  // x86

bool Avx2Supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

namespace {

using KernelFn = std::uint64_t (*)(std::uint64_t, std::uint64_t,
                                   std::uint64_t);

KernelFn SelectKernel() {
#if defined(__x86_64__) || defined(__i386__)
  if (Avx2Supported()) return &PopcountBitsAvx2;
#endif
  return &PopcountBitsScalar;
}

const KernelFn kKernel = SelectKernel();

}  // namespace

std::uint64_t PopcountBits(std::uint64_t key, std::uint64_t begin,
                           std::uint64_t end) {
  return kKernel(key, begin, end);
}

const char* ActiveKernel() {
#if defined(__x86_64__) || defined(__i386__)
  if (kKernel == &PopcountBitsAvx2) return "avx2";
#endif
  return "scalar";
}

}  // namespace egta::kernels
