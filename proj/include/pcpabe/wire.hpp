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

// Key files and ciphertext containers.
//
//   magic(4) || version(1) || records
//   record := tag(1) || length(4, big-endian) || value
//
// Every file starts with a widths record so a reader can refuse encodings
// from a different group before touching them. Unknown tags, duplicated
// singular tags and missing fields are decode errors.

#include <string_view>

#include "pcpabe/abe.hpp"

namespace pcpabe::wire {

inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::string_view kMagicPublic = "PCPK";
inline constexpr std::string_view kMagicMaster = "PCMK";
inline constexpr std::string_view kMagicSecret = "PCSK";
inline constexpr std::string_view kMagicCiphertext = "PCCT";

Bytes encode(const PublicParams& pk);
Bytes encode(const MasterKey& mk);
Bytes encode(const AttributeKey& sk);
Bytes encode(const Ciphertext& ct);

PublicParams decode_public(ByteView bytes);
MasterKey decode_master(ByteView bytes);
AttributeKey decode_secret(ByteView bytes);
Ciphertext decode_ciphertext(ByteView bytes);

/// The magic of a file, or "" when it is none of the four.
std::string_view sniff(ByteView bytes);

}  // namespace pcpabe::wire
