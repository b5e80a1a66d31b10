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

// Bilinear-group arithmetic over BLS12-381, exposed through a symmetric
// pairing contract e: G x G -> GT.
//
// A SourceElement g^x is stored as the pair (g1^x, g2^x) of its images in the
// two pairing input groups, so pair(a, b) = e(a.g1, b.g2) = e(g1, g2)^{ab}
// and every formula over a single group G reads as written. Elements coming
// out of hash_to_group() have unknown discrete logarithm and therefore only
// carry a G2 image; pair() orients itself to whichever argument has a G1
// image. Pairing two hashed elements has no defined value and throws.

#include <array>
#include <cstdint>
#include <string_view>

#include "blst.h"
#include "pcpabe/bytes.hpp"

namespace pcpabe {

class Rng;

/// Element of Z_p, p = the BLS12-381 subgroup order (255 bits).
class Scalar {
  public:
    static constexpr std::size_t kBytes = 32;

    Scalar();  // zero
    static Scalar from_u64(std::uint64_t v);
    /// Uniform over [0, p).
    static Scalar random(Rng& rng);
    /// Uniform over [1, p); re-draws on zero.
    static Scalar random_nonzero(Rng& rng);
    /// Strict decode of a 32-byte big-endian integer; values >= p are rejected.
    static Scalar from_bytes(ByteView be);
    /// Big-endian integer of any length, reduced mod p.
    static Scalar from_bytes_reduced(ByteView be);
    /// p itself, big-endian.
    static std::array<std::uint8_t, kBytes> modulus_bytes();

    std::array<std::uint8_t, kBytes> to_bytes() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    /// Throws std::domain_error on zero.
    Scalar inverse() const;
    bool is_zero() const;
    bool operator==(const Scalar& o) const;

    /// Little-endian canonical integer, as blst's scalar multiplication wants it.
    blst_scalar raw() const;

  private:
    blst_fr v_;
};

/// Element of the (symmetric) source group G.
class SourceElement {
  public:
    static constexpr std::size_t kBytes = 1 + 48 + 96;

    SourceElement();  // identity
    static SourceElement generator();
    static SourceElement identity() { return {}; }

    SourceElement operator*(const SourceElement& o) const;
    SourceElement operator/(const SourceElement& o) const;
    SourceElement inverse() const;
    SourceElement pow(const Scalar& e) const;

    bool is_identity() const;
    /// False for hash_to_group outputs and anything derived from them.
    bool has_g1() const { return has_g1_; }
    /// Equality of the underlying group element (the G2 image determines it).
    bool operator==(const SourceElement& o) const;

    /// flag(1) || compressed G1 (48, zero when absent) || compressed G2 (96).
    std::array<std::uint8_t, kBytes> serialize() const;
    /// Rejects malformed, non-canonical and off-subgroup encodings.
    static SourceElement deserialize(ByteView bytes);

    const blst_p1& g1() const { return g1_; }
    const blst_p2& g2() const { return g2_; }

  private:
    friend SourceElement hash_to_group(ByteView label, std::string_view dst);
    blst_p1 g1_;
    blst_p2 g2_;
    bool has_g1_ = true;
};

/// Element of the target group GT (the order-p subgroup of Fp12*).
class TargetElement {
  public:
    static constexpr std::size_t kBytes = 12 * 48;

    TargetElement();  // one
    static TargetElement one() { return {}; }

    TargetElement operator*(const TargetElement& o) const;
    TargetElement operator/(const TargetElement& o) const;
    TargetElement inverse() const;
    TargetElement pow(const Scalar& e) const;

    bool is_one() const;
    bool operator==(const TargetElement& o) const;

    Bytes serialize() const;
    static TargetElement deserialize(ByteView bytes);

  private:
    friend TargetElement pair(const SourceElement&, const SourceElement&);
    friend TargetElement pair_ratio(const SourceElement&, const SourceElement&,
                                    const SourceElement&, const SourceElement&);
    blst_fp12 v_;
};

inline SourceElement exp(const SourceElement& base, const Scalar& e) { return base.pow(e); }
inline TargetElement exp(const TargetElement& base, const Scalar& e) { return base.pow(e); }

/// e(a, b). At least one argument must carry a G1 image.
TargetElement pair(const SourceElement& a, const SourceElement& b);
/// e(a, b) / e(c, d) with a single final exponentiation.
TargetElement pair_ratio(const SourceElement& a, const SourceElement& b, const SourceElement& c,
                         const SourceElement& d);

/// Domain-separation tag for hash_to_group, recorded in PublicParams.
inline constexpr std::string_view kHashToGroupDst =
    "PCPABE-V01-CS01-with-BLS12381G2_XMD:SHA-256_SSWU_RO_";

/// RFC 9380 hash-to-curve (BLS12381G2_XMD:SHA-256_SSWU_RO_) onto the G2 image.
SourceElement hash_to_group(ByteView label, std::string_view dst = kHashToGroupDst);

}  // namespace pcpabe
