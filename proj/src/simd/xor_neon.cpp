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

#include "pcpabe/simd/xor.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace pcpabe::simd::neon {

void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 64 <= n; i += 64) {
        uint8x16x4_t d = vld1q_u8_x4(dst + i);
        uint8x16x4_t s = vld1q_u8_x4(src + i);
        d.val[0] = veorq_u8(d.val[0], s.val[0]);
        d.val[1] = veorq_u8(d.val[1], s.val[1]);
        d.val[2] = veorq_u8(d.val[2], s.val[2]);
        d.val[3] = veorq_u8(d.val[3], s.val[3]);
        vst1q_u8_x4(dst + i, d);
    }
    for (; i + 16 <= n; i += 16) vst1q_u8(dst + i, veorq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
    if (i < n) scalar::xor_into(dst + i, src + i, n - i);
}

void xor_to(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) vst1q_u8(dst + i, veorq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
    if (i < n) scalar::xor_to(dst + i, a + i, b + i, n - i);
}

}  // namespace pcpabe::simd::neon

#endif
