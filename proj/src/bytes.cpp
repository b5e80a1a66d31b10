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
#include "pcpabe/bytes.hpp"

namespace pcpabe {

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

void ByteWriter::str16(ByteView b) {
    if (b.size() > 0xffff) throw std::length_error("str16: value longer than 65535 bytes");
    u16(static_cast<std::uint16_t>(b.size()));
    raw(b);
}

void ByteWriter::blob32(ByteView b) {
    if (b.size() > 0xffffffffu) throw std::length_error("blob32: value longer than 2^32-1 bytes");
    u32(static_cast<std::uint32_t>(b.size()));
    raw(b);
}

ByteView ByteReader::raw(std::size_t n) {
    if (n > remaining()) throw DecodeError("truncated input");
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint64_t ByteReader::get_be(int width) {
    auto b = raw(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

void ByteReader::expect_done(const char* what) const {
    if (!done()) throw DecodeError(std::string(what) + ": trailing bytes");
}

}  // namespace pcpabe
