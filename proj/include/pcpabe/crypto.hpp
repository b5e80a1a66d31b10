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

// Symmetric primitives and randomness, all delegated to OpenSSL.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "pcpabe/bytes.hpp"

namespace pcpabe {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);
/// SHA-256 over a domain tag followed by the data.
Digest tagged_hash(std::string_view tag, ByteView data);
/// SHAKE256 expansion of (tag || data) to `len` bytes.
Bytes shake256_expand(std::string_view tag, ByteView data, std::size_t len);
/// HKDF-SHA256 extract-and-expand.
Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t len);

inline constexpr std::size_t kAeadKeyBytes = 32;
inline constexpr std::size_t kAeadNonceBytes = 12;
inline constexpr std::size_t kAeadTagBytes = 16;

/// AES-256-GCM. The output is ciphertext || tag.
Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext);
/// Returns nullopt when the tag does not verify.
std::optional<Bytes> aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView sealed);

/// Entropy source. `system()` draws from the OS through OpenSSL; `seeded()`
/// is a ChaCha20 keystream under SHA-256(seed), for reproducible runs.
class Rng {
  public:
    static Rng system();
    static Rng seeded(std::uint64_t seed);

    Rng(Rng&&) noexcept;
    Rng& operator=(Rng&&) noexcept;
    ~Rng();

    void fill(std::span<std::uint8_t> out);
    Bytes bytes(std::size_t n);
    std::uint64_t next_u64();
    /// Uniform integer in [0, bound).
    std::uint64_t uniform(std::uint64_t bound);
    /// Independent child stream, for handing to a concurrent task.
    Rng fork();
    bool deterministic() const { return ctx_ != nullptr; }

  private:
    explicit Rng(void* ctx) : ctx_(ctx) {}
    void* ctx_;  // EVP_CIPHER_CTX*, or null for the system source
};

}  // namespace pcpabe
