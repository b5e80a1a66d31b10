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
#include "pcpabe/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <openssl/rand.h>

#include <cstring>
#include <memory>
#include <stdexcept>

namespace pcpabe {

namespace {

struct MdCtxFree {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
struct CipherCtxFree {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
struct PkeyCtxFree {
    void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

void check(int ok, const char* what) {
    if (ok != 1) throw std::runtime_error(std::string("openssl: ") + what + " failed");
}

MdCtx digest_begin(const EVP_MD* md) {
    MdCtx ctx(EVP_MD_CTX_new());
    if (!ctx) throw std::bad_alloc();
    check(EVP_DigestInit_ex(ctx.get(), md, nullptr), "DigestInit");
    return ctx;
}

void digest_tag(EVP_MD_CTX* ctx, std::string_view tag) {
    // Length-prefixed so that (tag, data) pairs cannot run into each other.
    const std::uint8_t len[2] = {static_cast<std::uint8_t>(tag.size() >> 8),
                                 static_cast<std::uint8_t>(tag.size())};
    check(EVP_DigestUpdate(ctx, len, 2), "DigestUpdate");
    check(EVP_DigestUpdate(ctx, tag.data(), tag.size()), "DigestUpdate");
}

}  // namespace

Digest sha256(ByteView data) {
    Digest out{};
    auto ctx = digest_begin(EVP_sha256());
    check(EVP_DigestUpdate(ctx.get(), data.data(), data.size()), "DigestUpdate");
    check(EVP_DigestFinal_ex(ctx.get(), out.data(), nullptr), "DigestFinal");
    return out;
}

Digest tagged_hash(std::string_view tag, ByteView data) {
    Digest out{};
    auto ctx = digest_begin(EVP_sha256());
    digest_tag(ctx.get(), tag);
    check(EVP_DigestUpdate(ctx.get(), data.data(), data.size()), "DigestUpdate");
    check(EVP_DigestFinal_ex(ctx.get(), out.data(), nullptr), "DigestFinal");
    return out;
}

Bytes shake256_expand(std::string_view tag, ByteView data, std::size_t len) {
    Bytes out(len);
    auto ctx = digest_begin(EVP_shake256());
    digest_tag(ctx.get(), tag);
    check(EVP_DigestUpdate(ctx.get(), data.data(), data.size()), "DigestUpdate");
    check(EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()), "DigestFinalXOF");
    return out;
}

Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t len) {
    std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree> ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
    if (!ctx) throw std::bad_alloc();
    check(EVP_PKEY_derive_init(ctx.get()), "HKDF init");
    check(EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()), "HKDF md");
    check(EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), salt.data(), static_cast<int>(salt.size())),
          "HKDF salt");
    check(EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ikm.data(), static_cast<int>(ikm.size())),
          "HKDF key");
    check(EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), info.data(), static_cast<int>(info.size())),
          "HKDF info");
    Bytes out(len);
    std::size_t out_len = len;
    check(EVP_PKEY_derive(ctx.get(), out.data(), &out_len), "HKDF derive");
    return out;
}

Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext) {
    if (key.size() != kAeadKeyBytes || nonce.size() != kAeadNonceBytes)
        throw std::invalid_argument("aead_seal: bad key or nonce length");
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw std::bad_alloc();
    check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()),
          "EncryptInit");
    int len = 0;
    if (!aad.empty())
        check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
              "EncryptUpdate(aad)");
    Bytes out(plaintext.size() + kAeadTagBytes);
    std::size_t done = 0;
    // EVP takes int lengths; feed large payloads in slices.
    constexpr std::size_t kSlice = std::size_t{1} << 30;
    while (done < plaintext.size()) {
        const std::size_t n = std::min(kSlice, plaintext.size() - done);
        check(EVP_EncryptUpdate(ctx.get(), out.data() + done, &len, plaintext.data() + done,
                                static_cast<int>(n)),
              "EncryptUpdate");
        done += static_cast<std::size_t>(len);
    }
    check(EVP_EncryptFinal_ex(ctx.get(), out.data() + done, &len), "EncryptFinal");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagBytes,
                              out.data() + plaintext.size()),
          "GET_TAG");
    return out;
}

std::optional<Bytes> aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView sealed) {
    if (key.size() != kAeadKeyBytes || nonce.size() != kAeadNonceBytes)
        throw std::invalid_argument("aead_open: bad key or nonce length");
    if (sealed.size() < kAeadTagBytes) return std::nullopt;
    const std::size_t body = sealed.size() - kAeadTagBytes;
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw std::bad_alloc();
    check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()),
          "DecryptInit");
    int len = 0;
    if (!aad.empty())
        check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
              "DecryptUpdate(aad)");
    Bytes out(body);
    std::size_t done = 0;
    constexpr std::size_t kSlice = std::size_t{1} << 30;
    while (done < body) {
        const std::size_t n = std::min(kSlice, body - done);
        check(EVP_DecryptUpdate(ctx.get(), out.data() + done, &len, sealed.data() + done,
                                static_cast<int>(n)),
              "DecryptUpdate");
        done += static_cast<std::size_t>(len);
    }
    Bytes tag(sealed.begin() + static_cast<std::ptrdiff_t>(body), sealed.end());
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagBytes, tag.data()),
          "SET_TAG");
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + done, &len) != 1) return std::nullopt;
    return out;
}

// ---------------------------------------------------------------------------

Rng Rng::system() { return Rng(nullptr); }

Rng Rng::seeded(std::uint64_t seed) {
    Bytes s(8);
    for (int i = 0; i < 8; ++i) s[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
    const Digest key = tagged_hash("pcpabe/rng", s);
    auto* ctx = EVP_CIPHER_CTX_new();
    if (!ctx) throw std::bad_alloc();
    const std::uint8_t iv[16] = {};
    if (EVP_EncryptInit_ex(ctx, EVP_chacha20(), nullptr, key.data(), iv) != 1) {
        EVP_CIPHER_CTX_free(ctx);
        throw std::runtime_error("openssl: chacha20 init failed");
    }
    return Rng(ctx);
}

Rng::Rng(Rng&& o) noexcept : ctx_(o.ctx_) { o.ctx_ = nullptr; }

Rng& Rng::operator=(Rng&& o) noexcept {
    if (this != &o) {
        EVP_CIPHER_CTX_free(static_cast<EVP_CIPHER_CTX*>(ctx_));
        ctx_ = o.ctx_;
        o.ctx_ = nullptr;
    }
    return *this;
}

Rng::~Rng() { EVP_CIPHER_CTX_free(static_cast<EVP_CIPHER_CTX*>(ctx_)); }

void Rng::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (!ctx_) {
        check(RAND_bytes(out.data(), static_cast<int>(out.size())), "RAND_bytes");
        return;
    }
    std::memset(out.data(), 0, out.size());
    int len = 0;
    check(EVP_EncryptUpdate(static_cast<EVP_CIPHER_CTX*>(ctx_), out.data(), &len, out.data(),
                            static_cast<int>(out.size())),
          "chacha20 keystream");
}

Bytes Rng::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::uint64_t Rng::next_u64() {
    std::uint8_t b[8];
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::uniform: zero bound");
    // Rejection sampling keeps the result unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        const std::uint64_t v = next_u64();
        if (v < limit) return v % bound;
    }
}

Rng Rng::fork() {
    if (!ctx_) return system();
    return seeded(next_u64());
}

}  // namespace pcpabe
