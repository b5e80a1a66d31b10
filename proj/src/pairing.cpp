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
#include "pcpabe/pairing.hpp"

#include <cstring>
#include <stdexcept>

#include "pcpabe/crypto.hpp"

namespace pcpabe {

namespace {

constexpr std::array<std::uint8_t, Scalar::kBytes> kOrder = {
    0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8, 0x08, 0x09, 0xa1, 0xd8, 0x05,
    0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe, 0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01};

constexpr std::size_t kScalarBits = 255;

}  // namespace

// --- Scalar ----------------------------------------------------------------

Scalar::Scalar() { std::memset(&v_, 0, sizeof v_); }

Scalar Scalar::from_u64(std::uint64_t v) {
    const std::uint64_t limbs[4] = {v, 0, 0, 0};
    Scalar out;
    blst_fr_from_uint64(&out.v_, limbs);
    return out;
}

Scalar Scalar::random(Rng& rng) {
    // 512 bits reduced mod p: statistical distance from uniform is ~2^-257.
    std::uint8_t wide[64];
    rng.fill(wide);
    return from_bytes_reduced(wide);
}

Scalar Scalar::random_nonzero(Rng& rng) {
    for (;;) {
        Scalar s = random(rng);
        if (!s.is_zero()) return s;
    }
}

Scalar Scalar::from_bytes(ByteView be) {
    if (be.size() != kBytes) throw DecodeError("scalar: expected 32 bytes");
    blst_scalar s;
    blst_scalar_from_bendian(&s, be.data());
    if (!blst_scalar_fr_check(&s)) throw DecodeError("scalar: value not below the group order");
    Scalar out;
    blst_fr_from_scalar(&out.v_, &s);
    return out;
}

Scalar Scalar::from_bytes_reduced(ByteView be) {
    blst_scalar s;
    blst_scalar_from_be_bytes(&s, be.data(), be.size());
    Scalar out;
    blst_fr_from_scalar(&out.v_, &s);
    return out;
}

std::array<std::uint8_t, Scalar::kBytes> Scalar::modulus_bytes() { return kOrder; }

std::array<std::uint8_t, Scalar::kBytes> Scalar::to_bytes() const {
    std::array<std::uint8_t, kBytes> out{};
    const blst_scalar s = raw();
    blst_bendian_from_scalar(out.data(), &s);
    return out;
}

blst_scalar Scalar::raw() const {
    blst_scalar s;
    blst_scalar_from_fr(&s, &v_);
    return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar out;
    blst_fr_add(&out.v_, &v_, &o.v_);
    return out;
}

Scalar Scalar::operator-(const Scalar& o) const {
    Scalar out;
    blst_fr_sub(&out.v_, &v_, &o.v_);
    return out;
}

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar out;
    blst_fr_mul(&out.v_, &v_, &o.v_);
    return out;
}

Scalar Scalar::operator-() const {
    Scalar out;
    blst_fr_cneg(&out.v_, &v_, true);
    return out;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("scalar: inverse of zero");
    Scalar out;
    blst_fr_inverse(&out.v_, &v_);
    return out;
}

bool Scalar::is_zero() const {
    static const blst_fr kZero{};
    return std::memcmp(&v_, &kZero, sizeof v_) == 0;
}

bool Scalar::operator==(const Scalar& o) const { return std::memcmp(&v_, &o.v_, sizeof v_) == 0; }

// --- SourceElement ---------------------------------------------------------

SourceElement::SourceElement() {
    std::memset(&g1_, 0, sizeof g1_);
    std::memset(&g2_, 0, sizeof g2_);
}

SourceElement SourceElement::generator() {
    SourceElement out;
    out.g1_ = *blst_p1_generator();
    out.g2_ = *blst_p2_generator();
    return out;
}

SourceElement SourceElement::operator*(const SourceElement& o) const {
    SourceElement out;
    out.has_g1_ = has_g1_ && o.has_g1_;
    if (out.has_g1_) blst_p1_add_or_double(&out.g1_, &g1_, &o.g1_);
    blst_p2_add_or_double(&out.g2_, &g2_, &o.g2_);
    return out;
}

SourceElement SourceElement::inverse() const {
    SourceElement out = *this;
    blst_p1_cneg(&out.g1_, true);
    blst_p2_cneg(&out.g2_, true);
    return out;
}

SourceElement SourceElement::operator/(const SourceElement& o) const { return *this * o.inverse(); }

SourceElement SourceElement::pow(const Scalar& e) const {
    const blst_scalar s = e.raw();
    SourceElement out;
    out.has_g1_ = has_g1_;
    if (has_g1_) blst_p1_mult(&out.g1_, &g1_, s.b, kScalarBits);
    blst_p2_mult(&out.g2_, &g2_, s.b, kScalarBits);
    return out;
}

bool SourceElement::is_identity() const { return blst_p2_is_inf(&g2_); }

bool SourceElement::operator==(const SourceElement& o) const { return blst_p2_is_equal(&g2_, &o.g2_); }

std::array<std::uint8_t, SourceElement::kBytes> SourceElement::serialize() const {
    std::array<std::uint8_t, kBytes> out{};
    out[0] = has_g1_ ? 1 : 0;
    if (has_g1_) blst_p1_compress(out.data() + 1, &g1_);
    blst_p2_compress(out.data() + 1 + 48, &g2_);
    return out;
}

SourceElement SourceElement::deserialize(ByteView bytes) {
    if (bytes.size() != kBytes) throw DecodeError("source element: bad length");
    const std::uint8_t flag = bytes[0];
    if (flag > 1) throw DecodeError("source element: bad flag byte");
    SourceElement out;
    out.has_g1_ = flag == 1;
    if (out.has_g1_) {
        blst_p1_affine a;
        if (blst_p1_uncompress(&a, bytes.data() + 1) != BLST_SUCCESS)
            throw DecodeError("source element: bad G1 encoding");
        if (!blst_p1_affine_in_g1(&a)) throw DecodeError("source element: G1 point off subgroup");
        blst_p1_from_affine(&out.g1_, &a);
    }
    blst_p2_affine b;
    if (blst_p2_uncompress(&b, bytes.data() + 1 + 48) != BLST_SUCCESS)
        throw DecodeError("source element: bad G2 encoding");
    if (!blst_p2_affine_in_g2(&b)) throw DecodeError("source element: G2 point off subgroup");
    blst_p2_from_affine(&out.g2_, &b);
    // Canonical form only: exactly one encoding per element.
    const auto again = out.serialize();
    if (!std::equal(again.begin(), again.end(), bytes.begin()))
        throw DecodeError("source element: non-canonical encoding");
    return out;
}

// --- TargetElement ---------------------------------------------------------

TargetElement::TargetElement() : v_(*blst_fp12_one()) {}

TargetElement TargetElement::operator*(const TargetElement& o) const {
    TargetElement out;
    blst_fp12_mul(&out.v_, &v_, &o.v_);
    return out;
}

TargetElement TargetElement::inverse() const {
    // Unitary in the cyclotomic subgroup: the inverse is the conjugate.
    TargetElement out = *this;
    blst_fp12_conjugate(&out.v_);
    return out;
}

TargetElement TargetElement::operator/(const TargetElement& o) const { return *this * o.inverse(); }

TargetElement TargetElement::pow(const Scalar& e) const {
    // Fixed 4-bit window, most significant nibble first.
    std::array<blst_fp12, 16> table;
    table[0] = *blst_fp12_one();
    table[1] = v_;
    for (std::size_t i = 2; i < table.size(); ++i) blst_fp12_mul(&table[i], &table[i - 1], &v_);

    const blst_scalar s = e.raw();
    blst_fp12 acc = *blst_fp12_one();
    bool started = false;
    for (int byte = 31; byte >= 0; --byte) {
        for (int half = 1; half >= 0; --half) {
            const unsigned nib = (s.b[byte] >> (4 * half)) & 0xf;
            if (started)
                for (int k = 0; k < 4; ++k) blst_fp12_cyclotomic_sqr(&acc, &acc);
            if (nib != 0) {
                blst_fp12_mul(&acc, &acc, &table[nib]);
                started = true;
            }
        }
    }
    TargetElement out;
    out.v_ = acc;
    return out;
}

bool TargetElement::is_one() const { return blst_fp12_is_one(&v_); }

bool TargetElement::operator==(const TargetElement& o) const { return blst_fp12_is_equal(&v_, &o.v_); }

Bytes TargetElement::serialize() const {
    Bytes out(kBytes);
    std::size_t off = 0;
    for (const auto& f6 : v_.fp6)
        for (const auto& f2 : f6.fp2)
            for (const auto& f : f2.fp) {
                blst_bendian_from_fp(out.data() + off, &f);
                off += 48;
            }
    return out;
}

TargetElement TargetElement::deserialize(ByteView bytes) {
    if (bytes.size() != kBytes) throw DecodeError("target element: bad length");
    TargetElement out;
    std::size_t off = 0;
    for (auto& f6 : out.v_.fp6)
        for (auto& f2 : f6.fp2)
            for (auto& f : f2.fp) {
                blst_fp_from_bendian(&f, bytes.data() + off);
                off += 48;
            }
    const Bytes again = out.serialize();
    if (!std::equal(again.begin(), again.end(), bytes.begin()))
        throw DecodeError("target element: non-canonical field encoding");
    if (!blst_fp12_in_group(&out.v_)) throw DecodeError("target element: not in GT");
    return out;
}

// --- pairing ---------------------------------------------------------------

namespace {

struct Oriented {
    blst_p1_affine p;
    blst_p2_affine q;
    bool trivial;
};

Oriented orient(const SourceElement& a, const SourceElement& b) {
    const SourceElement* left = nullptr;
    const SourceElement* right = nullptr;
    if (a.has_g1()) {
        left = &a;
        right = &b;
    } else if (b.has_g1()) {
        left = &b;
        right = &a;
    } else {
        throw std::logic_error("pair: neither argument has a G1 image (both are hashed elements)");
    }
    Oriented o{};
    o.trivial = blst_p1_is_inf(&left->g1()) || blst_p2_is_inf(&right->g2());
    if (!o.trivial) {
        blst_p1_to_affine(&o.p, &left->g1());
        blst_p2_to_affine(&o.q, &right->g2());
    }
    return o;
}

}  // namespace

TargetElement pair(const SourceElement& a, const SourceElement& b) {
    const Oriented o = orient(a, b);
    TargetElement out;
    if (o.trivial) return out;
    blst_fp12 f;
    blst_miller_loop(&f, &o.q, &o.p);
    blst_final_exp(&out.v_, &f);
    return out;
}

TargetElement pair_ratio(const SourceElement& a, const SourceElement& b, const SourceElement& c,
                         const SourceElement& d) {
    const Oriented num = orient(a, b);
    // e(c, d)^-1 = e(c^-1, d); negating the G1 side keeps one final exponentiation.
    Oriented den = orient(c, d);
    blst_fp12 acc = *blst_fp12_one();
    bool any = false;
    if (!num.trivial) {
        blst_miller_loop(&acc, &num.q, &num.p);
        any = true;
    }
    if (!den.trivial) {
        blst_p1 neg;
        blst_p1_from_affine(&neg, &den.p);
        blst_p1_cneg(&neg, true);
        blst_p1_to_affine(&den.p, &neg);
        blst_fp12 f;
        blst_miller_loop(&f, &den.q, &den.p);
        if (any) blst_fp12_mul(&acc, &acc, &f);
        else acc = f;
        any = true;
    }
    TargetElement out;
    if (any) blst_final_exp(&out.v_, &acc);
    return out;
}

SourceElement hash_to_group(ByteView label, std::string_view dst) {
    SourceElement out;
    out.has_g1_ = false;
    blst_hash_to_g2(&out.g2_, label.data(), label.size(),
                    reinterpret_cast<const std::uint8_t*>(dst.data()), dst.size(), nullptr, 0);
    return out;
}

}  // namespace pcpabe
