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

#include <doctest.h>

#include <set>

#include "pcpabe/crypto.hpp"
#include "pcpabe/pairing.hpp"

using namespace pcpabe;

namespace {

/// p - 1 as a scalar: 0 - 1.
Scalar minus_one() { return Scalar{} - Scalar::from_u64(1); }

}  // namespace

TEST_CASE("scalar field") {
    auto rng = Rng::seeded(1);
    CHECK(Scalar::from_u64(1).inverse() == Scalar::from_u64(1));
    for (int i = 0; i < 50; ++i) {
        const Scalar a = Scalar::random_nonzero(rng), b = Scalar::random(rng);
        CHECK(a * a.inverse() == Scalar::from_u64(1));
        CHECK((a + -a).is_zero());
        CHECK((a + b) - b == a);
        CHECK(Scalar::from_bytes(a.to_bytes()) == a);
    }
    CHECK_THROWS_AS(Scalar{}.inverse(), std::domain_error);
    CHECK((minus_one() + Scalar::from_u64(1)).is_zero());
    // the modulus itself is not a canonical encoding
    const auto p = Scalar::modulus_bytes();
    CHECK_THROWS_AS(Scalar::from_bytes(p), DecodeError);
    CHECK(Scalar::from_bytes_reduced(p).is_zero());
    CHECK_THROWS_AS(Scalar::from_bytes(Bytes(31, 0)), DecodeError);
}

TEST_CASE("seeded scalars") {
    auto a = Rng::seeded(42), b = Rng::seeded(42), c = Rng::seeded(43);
    const Scalar x = Scalar::random(a);
    CHECK(x == Scalar::random(b));
    CHECK_FALSE(x == Scalar::random(c));
    for (int i = 0; i < 100; ++i) CHECK_FALSE(Scalar::random_nonzero(a).is_zero());
}

TEST_CASE("source group exponentiation") {
    auto rng = Rng::seeded(2);
    const SourceElement g = SourceElement::generator();
    CHECK(exp(g, Scalar{}).is_identity());
    CHECK(exp(g, Scalar{}) == SourceElement::identity());
    // g^p = g^{p-1} * g = identity
    CHECK((exp(g, minus_one()) * g).is_identity());
    for (int i = 0; i < 10; ++i) {
        const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
        CHECK(exp(exp(g, a), b) == exp(g, a * b));
        CHECK(exp(g, a + b) == exp(g, a) * exp(g, b));
        CHECK(exp(g, a) / exp(g, a) == SourceElement::identity());
        CHECK(exp(g, a).inverse() == exp(g, -a));
    }
}

TEST_CASE("bilinearity over 100 random exponent pairs") {
    auto rng = Rng::seeded(3);
    const SourceElement g = SourceElement::generator();
    const TargetElement egg = pair(g, g);
    CHECK_FALSE(egg.is_one());
    CHECK(pair(g, SourceElement::identity()).is_one());
    CHECK(pair(SourceElement::identity(), g).is_one());
    for (int i = 0; i < 100; ++i) {
        const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
        CHECK(pair(exp(g, a), exp(g, b)) == exp(egg, a * b));
    }
}

TEST_CASE("pairing is symmetric and orients to the hashed side") {
    auto rng = Rng::seeded(4);
    const SourceElement g = SourceElement::generator();
    const SourceElement h = hash_to_group(to_bytes("attr"));
    CHECK_FALSE(h.has_g1());
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    CHECK(pair(exp(g, a), exp(g, b)) == pair(exp(g, b), exp(g, a)));
    CHECK(pair(exp(g, a), h) == pair(h, exp(g, a)));
    CHECK(pair(exp(g, a), exp(h, b)) == exp(pair(g, h), a * b));
    CHECK_THROWS_AS(pair(h, h), std::logic_error);
    // ratio form agrees with two pairings
    const SourceElement c = exp(g, b);
    CHECK(pair_ratio(exp(g, a), h, c, exp(h, a)) == pair(exp(g, a), h) / pair(c, exp(h, a)));
}

TEST_CASE("target group") {
    auto rng = Rng::seeded(5);
    const TargetElement e = pair(SourceElement::generator(), SourceElement::generator());
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    CHECK(exp(e, a) * exp(e, b) == exp(e, a + b));
    CHECK(exp(e, a) / exp(e, a) == TargetElement::one());
    CHECK(exp(e, a).inverse() == exp(e, -a));
    CHECK(exp(e, Scalar{}).is_one());
    CHECK(TargetElement::deserialize(exp(e, a).serialize()) == exp(e, a));
    Bytes bad = e.serialize();
    bad[5] ^= 0x40;
    CHECK_THROWS_AS(TargetElement::deserialize(bad), DecodeError);
}

TEST_CASE("hash to group") {
    const SourceElement a1 = hash_to_group(to_bytes("temp_sensor"));
    CHECK(a1 == hash_to_group(to_bytes("temp_sensor")));
    CHECK_FALSE(hash_to_group(to_bytes("a")) == hash_to_group(to_bytes("b")));
    CHECK_FALSE(hash_to_group({}).is_identity());
    CHECK_FALSE(hash_to_group(to_bytes("a"), "OTHER-DST") == hash_to_group(to_bytes("a")));
}

TEST_CASE("hash to group has no collisions over ten thousand labels") {
    std::set<std::array<std::uint8_t, SourceElement::kBytes>> seen;
    for (int i = 0; i < 10000; ++i) seen.insert(hash_to_group(to_bytes("label-" + std::to_string(i))).serialize());
    CHECK(seen.size() == 10000);
}

TEST_CASE("source element encoding") {
    auto rng = Rng::seeded(6);
    const SourceElement g = SourceElement::generator();
    for (const SourceElement& x : {g, exp(g, Scalar::random(rng)), SourceElement::identity(),
                                   hash_to_group(to_bytes("x"))}) {
        const auto bytes = x.serialize();
        const SourceElement y = SourceElement::deserialize(bytes);
        CHECK(y == x);
        CHECK(y.has_g1() == x.has_g1());
        CHECK(y.serialize() == bytes);
    }
    const auto bytes = g.serialize();
    CHECK_THROWS_AS(SourceElement::deserialize(ByteView(bytes).first(100)), DecodeError);
    CHECK_THROWS_AS(SourceElement::deserialize({}), DecodeError);
}

TEST_CASE("mutated encodings never crash") {
    auto rng = Rng::seeded(7);
    const SourceElement x = exp(SourceElement::generator(), Scalar::random(rng));
    const auto good = x.serialize();
    int rejected = 0, accepted = 0;
    for (int i = 0; i < 1000; ++i) {
        auto bytes = good;
        bytes[rng.uniform(bytes.size())] ^= static_cast<std::uint8_t>(1u << rng.uniform(8));
        try {
            const SourceElement y = SourceElement::deserialize(bytes);
            CHECK(y.serialize() == bytes);
            ++accepted;
        } catch (const DecodeError&) {
            ++rejected;
        }
    }
    CHECK(rejected + accepted == 1000);
    CHECK(rejected > 900);
}
