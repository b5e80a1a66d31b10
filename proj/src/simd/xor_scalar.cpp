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

#include <cstring>

namespace pcpabe::simd::scalar {

void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        std::uint64_t d, s;
        std::memcpy(&d, dst + i, 8);
        std::memcpy(&s, src + i, 8);
        d ^= s;
        std::memcpy(dst + i, &d, 8);
    }
    for (; i < n; ++i) dst[i] ^= src[i];
}

void xor_to(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        std::uint64_t x, y;
        std::memcpy(&x, a + i, 8);
        std::memcpy(&y, b + i, 8);
        x ^= y;
        std::memcpy(dst + i, &x, 8);
    }
    for (; i < n; ++i) dst[i] = a[i] ^ b[i];
}

}  // namespace pcpabe::simd::scalar
