/*
   Copyright 2026 The pcpabe Authors

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

// Byte-wise XOR kernels. Block chaining, id sharing and point-table masking
// all reduce to these loops, so they get a scalar reference plus vector
// variants selected once at run time.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pcpabe::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// Best ISA this CPU supports among the compiled-in variants.
Isa detect_isa();

/// True when the variant for `isa` is compiled in and runnable here.
bool isa_available(Isa isa);

// dst[i] ^= src[i]. Sizes must match.
using XorIntoFn = void (*)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
// dst[i] = a[i] ^ b[i]. dst may alias a or b.
using XorToFn = void (*)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b,
                         std::size_t n);

namespace scalar {
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void xor_to(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void xor_to(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void xor_to(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
}  // namespace neon
#endif

struct XorKernels {
    Isa isa;
    XorIntoFn xor_into;
    XorToFn xor_to;
};

XorKernels kernels_for(Isa isa);

/// Kernels for the detected ISA; resolved on first use.
const XorKernels& active();

/// Overrides dispatch, e.g. to force the scalar path in tests. Not thread-safe.
void force_isa(Isa isa);

// Span front-ends used by the rest of the library; they check lengths.
void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src);
void xor_to(std::span<std::uint8_t> dst, std::span<const std::uint8_t> a,
            std::span<const std::uint8_t> b);

}  // namespace pcpabe::simd
