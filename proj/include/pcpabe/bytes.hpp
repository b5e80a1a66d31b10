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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcpabe {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Thrown when an encoding is truncated, malformed or fails validation.
class DecodeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline ByteView as_view(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView bytes);

/// Big-endian append-only writer used by every wire format in the library.
class ByteWriter {
  public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put_be(v, 2); }
    void u32(std::uint32_t v) { put_be(v, 4); }
    void u64(std::uint64_t v) { put_be(v, 8); }
    void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
    /// 2-byte length prefix, for short strings such as attributes.
    void str16(ByteView b);
    /// 4-byte length prefix.
    void blob32(ByteView b);

    std::size_t size() const { return out_.size(); }
    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }

  private:
    void put_be(std::uint64_t v, int width) {
        for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    Bytes out_;
};

/// Bounds-checked big-endian reader; every overrun raises DecodeError.
class ByteReader {
  public:
    explicit ByteReader(ByteView in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get_be(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get_be(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get_be(4)); }
    std::uint64_t u64() { return get_be(8); }
    ByteView raw(std::size_t n);
    ByteView str16() { return raw(u16()); }
    ByteView blob32() { return raw(u32()); }

    std::size_t remaining() const { return in_.size() - pos_; }
    std::size_t position() const { return pos_; }
    bool done() const { return pos_ == in_.size(); }
    void expect_done(const char* what) const;

  private:
    std::uint64_t get_be(int width);
    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace pcpabe
