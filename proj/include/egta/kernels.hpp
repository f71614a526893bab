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

#ifndef EGTA_KERNELS_HPP_
#define EGTA_KERNELS_HPP_

#include <cstdint>

// Batch kernels over the Bernoulli bit streams of rng.hpp. The simulator's
// two-point noise reduces a batch of draws to the number of +1 bits in a
// counter range, so this popcount is the sampling inner loop. A scalar
// reference implementation and an AVX2 variant are provided; the variant is
// selected once at runtime and both must return identical values.

namespace egta::kernels {

// Number of set bits among stream-bit positions [begin, end) for `key`.
std::uint64_t PopcountBits(std::uint64_t key, std::uint64_t begin,
                           std::uint64_t end);

std::uint64_t PopcountBitsScalar(std::uint64_t key, std::uint64_t begin,
                                 std::uint64_t end);

#if defined(__x86_64__) || defined(__i386__)
std::uint64_t PopcountBitsAvx2(std::uint64_t key, std::uint64_t begin,
                               std::uint64_t end);
#endif

bool Avx2Supported();

// "avx2" or "scalar"; the implementation PopcountBits dispatches to.
const char* ActiveKernel();

}  // namespace egta::kernels

#endif  // EGTA_KERNELS_HPP_
