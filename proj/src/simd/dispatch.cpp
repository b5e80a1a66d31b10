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

#include <stdexcept>

#include "pcpabe/simd/xor.hpp"

namespace pcpabe::simd {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return "scalar";
        case Isa::kAvx2: return "avx2";
        case Isa::kNeon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return true;
        case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::kNeon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detect_isa() {
    if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
    if (isa_available(Isa::kNeon)) return Isa::kNeon;
    return Isa::kScalar;
}

XorKernels kernels_for(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("xor kernels: ISA not available on this CPU");
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::kAvx2: return {Isa::kAvx2, &avx2::xor_into, &avx2::xor_to};
#endif
#if defined(__aarch64__)
        case Isa::kNeon: return {Isa::kNeon, &neon::xor_into, &neon::xor_to};
#endif
        default: return {Isa::kScalar, &scalar::xor_into, &scalar::xor_to};
    }
}

namespace {
XorKernels& slot() {
    static XorKernels k = kernels_for(detect_isa());
    return k;
}
}  // namespace

const XorKernels& active() { return slot(); }

void force_isa(Isa isa) { slot() = kernels_for(isa); }

void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
    if (dst.size() != src.size()) throw std::invalid_argument("xor_into: length mismatch");
    active().xor_into(dst.data(), src.data(), dst.size());
}

void xor_to(std::span<std::uint8_t> dst, std::span<const std::uint8_t> a,
            std::span<const std::uint8_t> b) {
    if (dst.size() != a.size() || a.size() != b.size())
        throw std::invalid_argument("xor_to: length mismatch");
    active().xor_to(dst.data(), a.data(), b.data(), dst.size());
}

}  // namespace pcpabe::simd
