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

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace pcpabe::simd::avx2 {

// Built without -mavx2 for the whole TU; only these functions use AVX2 so the
// binary still runs on older x86-64 parts.
__attribute__((target("avx2"))) void xor_into(std::uint8_t* dst, const std::uint8_t* src,
                                               std::size_t n) {
    std::size_t i = 0;
    for (; i + 128 <= n; i += 128) {
        __m256i d0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i d1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i + 32));
        __m256i d2 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i + 64));
        __m256i d3 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i + 96));
        d0 = _mm256_xor_si256(d0, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i)));
        d1 = _mm256_xor_si256(d1, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i + 32)));
        d2 = _mm256_xor_si256(d2, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i + 64)));
        d3 = _mm256_xor_si256(d3, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i + 96)));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d0);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 32), d1);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 64), d2);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 96), d3);
    }
    for (; i + 32 <= n; i += 32) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        d = _mm256_xor_si256(d, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i)));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
    }
    if (i < n) scalar::xor_into(dst + i, src + i, n - i);
}

__attribute__((target("avx2"))) void xor_to(std::uint8_t* dst, const std::uint8_t* a,
                                             const std::uint8_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 64 <= n; i += 64) {
        __m256i x0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i x1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i + 32));
        __m256i y0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i y1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i + 32));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(x0, y0));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 32), _mm256_xor_si256(x1, y1));
    }
    for (; i + 32 <= n; i += 32) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(x, y));
    }
    if (i < n) scalar::xor_to(dst + i, a + i, b + i, n - i);
}

}  // namespace pcpabe::simd::avx2

#endif
