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
#include "pcpabe/chunker.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "pcpabe/simd/xor.hpp"

namespace pcpabe {

std::size_t block_length(std::size_t message_size, std::size_t n) {
    if (n < 1) throw std::invalid_argument("partition: n must be at least 1");
    return (message_size + kChunkHeaderBytes + n - 1) / n;
}

std::vector<PlainBlock> partition(ByteView message, std::size_t n) {
    const std::size_t b = block_length(message.size(), n);
    Bytes padded;
    padded.reserve(n * b);
    padded.push_back(kChunkFormatVersion);
    for (int i = 7; i >= 0; --i)
        padded.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(message.size()) >> (8 * i)));
    padded.insert(padded.end(), message.begin(), message.end());
    padded.resize(n * b, 0);
    std::vector<PlainBlock> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].index = i + 1;
        const auto first = padded.begin() + static_cast<std::ptrdiff_t>(i * b);
        out[i].bytes.assign(first, first + static_cast<std::ptrdiff_t>(b));
    }
    return out;
}

std::vector<ChainedBlock> chain(std::span<const PlainBlock> blocks) {
    std::vector<ChainedBlock> out(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        out[i].index = blocks[i].index;
        if (i == 0) {
            out[i].bytes = blocks[i].bytes;
            continue;
        }
        if (blocks[i].bytes.size() != blocks[i - 1].bytes.size())
            throw std::invalid_argument("chain: blocks differ in length");
        out[i].bytes.resize(blocks[i].bytes.size());
        simd::xor_to(out[i].bytes, blocks[i - 1].bytes, blocks[i].bytes);
    }
    return out;
}

std::vector<PlainBlock> unchain(std::vector<ChainedBlock> blocks) {
    std::sort(blocks.begin(), blocks.end(),
              [](const ChainedBlock& a, const ChainedBlock& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].index != i + 1)
            throw std::invalid_argument("unchain: block " + std::to_string(i + 1) + " is missing");
    std::vector<PlainBlock> out(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        out[i].index = i + 1;
        out[i].bytes = std::move(blocks[i].bytes);
        if (i == 0) continue;
        if (out[i].bytes.size() != out[i - 1].bytes.size())
            throw std::invalid_argument("unchain: blocks differ in length");
        simd::xor_into(out[i].bytes, out[i - 1].bytes);
    }
    return out;
}

Bytes reassemble(std::span<const PlainBlock> blocks) {
    Bytes all;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].index != i + 1) throw std::invalid_argument("reassemble: blocks out of order");
        if (!blocks[i].bytes.empty() && blocks[i].bytes.size() != blocks[0].bytes.size())
            throw std::invalid_argument("reassemble: blocks differ in length");
        all.insert(all.end(), blocks[i].bytes.begin(), blocks[i].bytes.end());
    }
    if (all.size() < kChunkHeaderBytes) throw DecodeError("reassemble: header truncated");
    if (all[0] != kChunkFormatVersion) throw DecodeError("reassemble: unknown version byte");
    std::uint64_t len = 0;
    for (std::size_t i = 1; i < kChunkHeaderBytes; ++i) len = (len << 8) | all[i];
    if (len > all.size() - kChunkHeaderBytes)
        throw DecodeError("reassemble: encoded length exceeds the payload");
    return Bytes(all.begin() + kChunkHeaderBytes,
                 all.begin() + static_cast<std::ptrdiff_t>(kChunkHeaderBytes + len));
}

std::vector<PlainBlock> StreamingUnchainer::push(ChainedBlock block) {
    if (block.index < 1 || block.index > pending_.size())
        throw std::invalid_argument("unchain: block index out of range");
    const std::size_t slot = block.index - 1;
    if (have_[slot]) throw std::invalid_argument("unchain: duplicate block");
    have_[slot] = true;
    pending_[slot] = std::move(block.bytes);
    std::vector<PlainBlock> out;
    while (next_ < pending_.size() && have_[next_]) {
        Bytes m = std::move(pending_[next_]);
        if (next_ > 0) {
            if (m.size() != previous_.size()) throw std::invalid_argument("unchain: blocks differ in length");
            simd::xor_into(m, previous_);
        }
        previous_ = m;
        out.push_back({next_ + 1, std::move(m)});
        ++next_;
    }
    return out;
}

}  // namespace pcpabe
