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
#include "pcpabe/sharing.hpp"

#include "pcpabe/simd/xor.hpp"

namespace pcpabe {

std::vector<Scalar> bytes_to_limbs(ByteView bytes) {
    std::vector<Scalar> out;
    for (std::size_t off = 0; off < bytes.size(); off += kLimbBytes)
        out.push_back(Scalar::from_bytes_reduced(bytes.subspan(off, std::min(kLimbBytes, bytes.size() - off))));
    return out;
}

std::optional<Bytes> limbs_to_bytes(std::span<const Scalar> limbs, std::size_t length) {
    if (limbs.size() != (length + kLimbBytes - 1) / kLimbBytes) return std::nullopt;
    Bytes out;
    out.reserve(length);
    for (std::size_t i = 0; i < limbs.size(); ++i) {
        const std::size_t width = std::min(kLimbBytes, length - i * kLimbBytes);
        const auto be = limbs[i].to_bytes();
        const auto pad = be.size() - width;
        if (std::any_of(be.begin(), be.begin() + static_cast<std::ptrdiff_t>(pad),
                        [](std::uint8_t b) { return b != 0; }))
            return std::nullopt;
        out.insert(out.end(), be.begin() + static_cast<std::ptrdiff_t>(pad), be.end());
    }
    return out;
}

// --- point table -----------------------------------------------------------

TableKey table_key(std::string_view attribute) { return tagged_hash("A-key", as_view(attribute)); }

Bytes table_mask(std::string_view attribute, std::size_t length) {
    return shake256_expand("A-mask", as_view(attribute), length);
}

namespace {

Bytes encode_point(const ShamirPoint<Scalar>& p) {
    Bytes out;
    out.reserve(Scalar::kBytes * (1 + p.y.size()));
    const auto x = p.x.to_bytes();
    out.insert(out.end(), x.begin(), x.end());
    for (const auto& y : p.y) {
        const auto b = y.to_bytes();
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

std::optional<ShamirPoint<Scalar>> decode_point(ByteView b, std::uint16_t t) {
    if (b.size() < 2 * Scalar::kBytes || b.size() % Scalar::kBytes != 0) return std::nullopt;
    try {
        ShamirPoint<Scalar> p;
        p.x = Scalar::from_bytes(b.first(Scalar::kBytes));
        bool in_range = false;
        for (std::uint16_t j = 1; j <= t && !in_range; ++j) in_range = p.x == Scalar::from_u64(j);
        if (!in_range) return std::nullopt;
        for (std::size_t off = Scalar::kBytes; off < b.size(); off += Scalar::kBytes)
            p.y.push_back(Scalar::from_bytes(b.subspan(off, Scalar::kBytes)));
        return p;
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

}  // namespace

MaskedPointTable build_point_table(const std::vector<std::vector<std::string>>& sets,
                                   const std::vector<ShamirPoint<Scalar>>& points, unsigned k) {
    if (sets.size() != points.size())
        throw std::invalid_argument("build_point_table: one point per attribute set required");
    if (k < 1 || k > sets.size() || sets.size() > 0xffff)
        throw std::invalid_argument("build_point_table: need 1 <= k <= t <= 65535");
    MaskedPointTable table;
    table.k = static_cast<std::uint16_t>(k);
    table.t = static_cast<std::uint16_t>(sets.size());
    std::map<std::string, std::vector<std::size_t>> branches;
    for (std::size_t j = 0; j < sets.size(); ++j)
        for (const auto& att : sets[j]) {
            auto& list = branches[att];
            if (list.empty() || list.back() != j) list.push_back(j);
        }
    for (const auto& [att, list] : branches) {
        ByteWriter w;
        w.u16(static_cast<std::uint16_t>(list.size()));
        for (auto j : list) w.raw(encode_point(points[j]));
        const Bytes plain = std::move(w).take();
        Bytes value = table_mask(att, plain.size());
        simd::xor_into(value, plain);
        if (!table.entries.emplace(table_key(att), std::move(value)).second)
            throw std::invalid_argument("build_point_table: table key collision on attribute '" + att + "'");
    }
    return table;
}

std::vector<ShamirPoint<Scalar>> lookup_points(const MaskedPointTable& table,
                                               const AttributeSet& attrs) {
    std::vector<ShamirPoint<Scalar>> out;
    for (const auto& att : attrs) {
        auto it = table.entries.find(table_key(att));
        if (it == table.entries.end() || it->second.size() < 2) continue;
        Bytes plain = table_mask(att, it->second.size());
        simd::xor_into(plain, it->second);
        const std::size_t count = std::size_t{plain[0]} << 8 | plain[1];
        const std::size_t body = plain.size() - 2;
        if (count == 0 || body % count != 0) continue;
        const std::size_t width = body / count;
        for (std::size_t c = 0; c < count; ++c) {
            auto p = decode_point(ByteView(plain).subspan(2 + c * width, width), table.t);
            if (!p) continue;
            const bool dup = std::any_of(out.begin(), out.end(),
                                         [&](const ShamirPoint<Scalar>& q) { return q.x == p->x; });
            if (!dup) out.push_back(std::move(*p));
        }
    }
    return out;
}

Bytes MaskedPointTable::serialize() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(entries.size()));
    for (const auto& [key, value] : entries) {
        w.raw(key);
        w.str16(value);
    }
    w.u16(k);
    w.u16(t);
    return std::move(w).take();
}

MaskedPointTable MaskedPointTable::deserialize(ByteView bytes) {
    ByteReader r(bytes);
    MaskedPointTable table;
    const std::uint32_t count = r.u32();
    if (count > r.remaining() / 34) throw DecodeError("point table: entry count exceeds input");
    const TableKey* prev = nullptr;
    for (std::uint32_t i = 0; i < count; ++i) {
        TableKey key;
        auto kb = r.raw(key.size());
        std::copy(kb.begin(), kb.end(), key.begin());
        auto v = r.str16();
        auto [it, fresh] = table.entries.emplace(key, Bytes(v.begin(), v.end()));
        if (!fresh || (prev && !(*prev < it->first)))
            throw DecodeError("point table: records not strictly sorted by key");
        prev = &it->first;
    }
    table.k = r.u16();
    table.t = r.u16();
    r.expect_done("point table");
    if (table.k < 1 || table.k > table.t) throw DecodeError("point table: bad (k, t)");
    return table;
}

// --- XOR id shares ---------------------------------------------------------

IdShareSet xor_share_ids(const SerializedTree& tree, std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("xor_share_ids: n must be at least 1");
    IdShareSet out;
    out.last = tree.bytes();
    for (std::size_t i = 0; i < n; ++i) {
        out.ids.push_back(rng.bytes(out.last.size()));
        simd::xor_into(out.last, out.ids.back());
    }
    return out;
}

Bytes xor_recover(std::span<const Bytes> ids, ByteView last) {
    Bytes acc(last.begin(), last.end());
    for (const auto& id : ids) {
        if (id.size() != acc.size()) throw std::invalid_argument("xor_recover: share length mismatch");
        simd::xor_into(acc, id);
    }
    return acc;
}

}  // namespace pcpabe
