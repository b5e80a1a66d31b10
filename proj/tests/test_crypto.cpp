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

#include "pcpabe/bytes.hpp"
#include "pcpabe/crypto.hpp"
#include "pcpabe/simd/xor.hpp"

using namespace pcpabe;

namespace {

Bytes from_hex(std::string_view h) {
    Bytes out;
    for (std::size_t i = 0; i + 1 < h.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(std::stoi(std::string(h.substr(i, 2)), nullptr, 16)));
    return out;
}

}  // namespace

TEST_CASE("byte writer and reader agree") {
    ByteWriter w;
    w.u8(0xab);
    w.u16(0x1234);
    w.u32(0xdeadbeef);
    w.u64(0x0102030405060708ull);
    w.str16(to_bytes("attr"));
    w.blob32(to_bytes("payload"));
    const Bytes b = std::move(w).take();
    CHECK(to_hex(ByteView(b).first(3)) == "ab1234");

    ByteReader r(b);
    CHECK(r.u8() == 0xab);
    CHECK(r.u16() == 0x1234);
    CHECK(r.u32() == 0xdeadbeef);
    CHECK(r.u64() == 0x0102030405060708ull);
    const ByteView attr = r.str16();
    CHECK(Bytes(attr.begin(), attr.end()) == to_bytes("attr"));
    const ByteView payload = r.blob32();
    CHECK(Bytes(payload.begin(), payload.end()) == to_bytes("payload"));
    CHECK(r.done());
}

TEST_CASE("byte reader refuses overruns") {
    const Bytes b{0x00, 0x05, 'a', 'b'};
    ByteReader r(b);
    CHECK_THROWS_AS(r.str16(), DecodeError);
    ByteReader r2(b);
    r2.u8();
    CHECK_THROWS_AS(r2.expect_done("x"), DecodeError);
}

TEST_CASE("hash vectors") {
    CHECK(to_hex(sha256(to_bytes("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // RFC 5869 test case 1
    const Bytes okm = hkdf_sha256(from_hex("0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b"),
                                  from_hex("000102030405060708090a0b0c"), from_hex("f0f1f2f3f4f5f6f7f8f9"), 42);
    CHECK(to_hex(okm) ==
          "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf34007208d5b887185865");
    CHECK(tagged_hash("a", to_bytes("bc")) != tagged_hash("ab", to_bytes("c")));
    CHECK(shake256_expand("t", to_bytes("x"), 100).size() == 100);
    const Bytes long_out = shake256_expand("t", to_bytes("x"), 100);
    CHECK(shake256_expand("t", to_bytes("x"), 64) == Bytes(long_out.begin(), long_out.begin() + 64));
}

TEST_CASE("aead round trip and tamper") {
    const Bytes key(kAeadKeyBytes, 7), nonce(kAeadNonceBytes, 9), aad = to_bytes("hdr");
    const Bytes msg = to_bytes("hello pipeline");
    Bytes sealed = aead_seal(key, nonce, aad, msg);
    CHECK(sealed.size() == msg.size() + kAeadTagBytes);
    CHECK(aead_open(key, nonce, aad, sealed) == msg);
    CHECK_FALSE(aead_open(key, nonce, to_bytes("hdx"), sealed));
    sealed[3] ^= 1;
    CHECK_FALSE(aead_open(key, nonce, aad, sealed));
    CHECK(aead_open(key, nonce, aad, aead_seal(key, nonce, aad, {})) == Bytes{});
}

TEST_CASE("seeded rng is reproducible") {
    auto a = Rng::seeded(42), b = Rng::seeded(42), c = Rng::seeded(43);
    const Bytes x = a.bytes(64);
    CHECK(x == b.bytes(64));
    CHECK(x != c.bytes(64));
    CHECK(a.deterministic());
    CHECK_FALSE(Rng::system().deterministic());
    for (int i = 0; i < 1000; ++i) CHECK(a.uniform(7) < 7);
    auto f1 = a.fork();
    auto f2 = b.fork();
    CHECK(f1.bytes(16) != a.bytes(16));
    (void)f2;
}

TEST_CASE("xor kernels agree with the scalar reference") {
    auto rng = Rng::seeded(5);
    for (auto isa : {simd::Isa::kScalar, simd::Isa::kAvx2, simd::Isa::kNeon}) {
        if (!simd::isa_available(isa)) continue;
        CAPTURE(simd::isa_name(isa));
        const auto k = simd::kernels_for(isa);
        for (std::size_t n : {0, 1, 7, 31, 32, 33, 63, 64, 65, 127, 128, 129, 1000, 4099}) {
            for (std::size_t offset : {0, 1, 3}) {
                const Bytes a = rng.bytes(n + offset), b = rng.bytes(n + offset);
                Bytes want(n), got(n);
                simd::scalar::xor_to(want.data(), a.data() + offset, b.data() + offset, n);
                k.xor_to(got.data(), a.data() + offset, b.data() + offset, n);
                CHECK(got == want);
                Bytes into(a.begin() + static_cast<std::ptrdiff_t>(offset), a.end());
                k.xor_into(into.data(), b.data() + offset, n);
                CHECK(into == want);
                // in-place aliasing
                Bytes alias(a.begin() + static_cast<std::ptrdiff_t>(offset), a.end());
                k.xor_to(alias.data(), alias.data(), b.data() + offset, n);
                CHECK(alias == want);
            }
        }
    }
}

TEST_CASE("dispatch can be forced and span front-ends check lengths") {
    const auto before = simd::active().isa;
    simd::force_isa(simd::Isa::kScalar);
    CHECK(simd::active().isa == simd::Isa::kScalar);
    Bytes a{1, 2, 3}, b{1, 2};
    CHECK_THROWS_AS(simd::xor_into(a, b), std::invalid_argument);
    simd::force_isa(before);
    CHECK(simd::active().isa == before);
    CHECK(simd::isa_available(simd::Isa::kScalar));
    CHECK(simd::isa_available(simd::detect_isa()));
}
