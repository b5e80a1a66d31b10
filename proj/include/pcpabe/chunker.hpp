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

// Message partition into n equal blocks and the XOR chaining between them.
//
// Layout before cutting: version(1) || length(8, big-endian) || M || zeros,
// padded to n * B with B = ceil((|M| + 9) / n).

#include <cstdint>
#include <span>
#include <vector>

#include "pcpabe/bytes.hpp"

namespace pcpabe {

inline constexpr std::uint8_t kChunkFormatVersion = 0x01;
inline constexpr std::size_t kChunkHeaderBytes = 9;

struct PlainBlock {
    std::size_t index = 0;  // 1-based
    Bytes bytes;
    bool operator==(const PlainBlock&) const = default;
};

struct ChainedBlock {
    std::size_t index = 0;  // 1-based
    Bytes bytes;
    bool operator==(const ChainedBlock&) const = default;
};

std::size_t block_length(std::size_t message_size, std::size_t n);

std::vector<PlainBlock> partition(ByteView message, std::size_t n);

/// DB_1 = M_1, DB_i = M_{i-1} xor M_i.
std::vector<ChainedBlock> chain(std::span<const PlainBlock> blocks);

/// Inverse of chain. Accepts any order; requires indices 1..n exactly once.
std::vector<PlainBlock> unchain(std::vector<ChainedBlock> blocks);

/// Concatenates, checks the header and truncates to the encoded length.
Bytes reassemble(std::span<const PlainBlock> blocks);

/// Incremental unchaining: M_i becomes available as soon as DB_1..DB_i are.
class StreamingUnchainer {
  public:
    explicit StreamingUnchainer(std::size_t n) : pending_(n), have_(n, false) {}
    /// Returns the plaintext blocks that became computable, in order.
    std::vector<PlainBlock> push(ChainedBlock block);
    bool complete() const { return next_ == pending_.size(); }
    std::size_t emitted() const { return next_; }

  private:
    std::vector<Bytes> pending_;
    std::vector<bool> have_;
    Bytes previous_;
    std::size_t next_ = 0;
};

}  // namespace pcpabe
