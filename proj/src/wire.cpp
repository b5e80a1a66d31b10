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

#include "pcpabe/wire.hpp"

#include <algorithm>
#include <map>

namespace pcpabe::wire {

namespace {

enum : std::uint8_t { kTagWidths = 0x01 };

// Public params
enum : std::uint8_t { kPkDst = 0x10, kPkG = 0x11, kPkH = 0x12, kPkAt = 0x13 };
// Master key
enum : std::uint8_t { kMkBeta = 0x20, kMkGAlpha = 0x21, kMkQ = 0x22, kMkDigest = 0x23 };
// Attribute key
enum : std::uint8_t { kSkDigest = 0x30, kSkD = 0x31, kSkDHat = 0x32, kSkComponent = 0x33 };
// Ciphertext
enum : std::uint8_t { kCtManifest = 0x40, kCtBlock = 0x41 };

class Envelope {
  public:
    explicit Envelope(std::string_view magic) {
        w_.raw(to_bytes(magic));
        w_.u8(kVersion);
        ByteWriter widths;
        widths.u16(Scalar::kBytes);
        widths.u16(SourceElement::kBytes);
        widths.u16(TargetElement::kBytes);
        put(kTagWidths, widths.bytes());
    }
    void put(std::uint8_t tag, ByteView value) {
        w_.u8(tag);
        w_.blob32(value);
    }
    template <std::size_t N>
    void put(std::uint8_t tag, const std::array<std::uint8_t, N>& value) {
        put(tag, ByteView(value.data(), N));
    }
    Bytes take() && { return std::move(w_).take(); }

  private:
    ByteWriter w_;
};

/// Records of one file, grouped by tag, in file order.
class Records {
  public:
    Records(ByteView bytes, std::string_view magic, std::initializer_list<std::uint8_t> singular,
            std::initializer_list<std::uint8_t> repeated) {
        ByteReader r(bytes);
        if (sniff(bytes) != magic) throw DecodeError("not a " + std::string(magic) + " file");
        r.raw(magic.size());
        if (const auto v = r.u8(); v != kVersion)
            throw DecodeError("unsupported version " + std::to_string(v));
        while (!r.done()) {
            const std::uint8_t tag = r.u8();
            const ByteView value = r.blob32();
            const bool one = tag == kTagWidths || std::find(singular.begin(), singular.end(), tag) != singular.end();
            const bool many = std::find(repeated.begin(), repeated.end(), tag) != repeated.end();
            if (!one && !many) throw DecodeError("unknown tag " + std::to_string(tag));
            if (one && by_tag_.count(tag)) throw DecodeError("duplicate tag " + std::to_string(tag));
            by_tag_[tag].push_back(value);
        }
        ByteReader w(get(kTagWidths));
        if (w.u16() != Scalar::kBytes || w.u16() != SourceElement::kBytes || w.u16() != TargetElement::kBytes)
            throw DecodeError("element widths do not match this build's group");
        w.expect_done("widths record");
    }

    ByteView get(std::uint8_t tag) const {
        auto it = by_tag_.find(tag);
        if (it == by_tag_.end()) throw DecodeError("missing tag " + std::to_string(tag));
        return it->second.front();
    }
    std::vector<ByteView> all(std::uint8_t tag) const {
        auto it = by_tag_.find(tag);
        return it == by_tag_.end() ? std::vector<ByteView>{} : it->second;
    }

  private:
    std::map<std::uint8_t, std::vector<ByteView>> by_tag_;
};

Digest to_digest(ByteView v) {
    if (v.size() != Digest{}.size()) throw DecodeError("digest must be 32 bytes");
    Digest d;
    std::copy(v.begin(), v.end(), d.begin());
    return d;
}

}  // namespace

Bytes encode(const PublicParams& pk) {
    Envelope e(kMagicPublic);
    e.put(kPkDst, to_bytes(pk.hash_dst));
    e.put(kPkG, pk.g.serialize());
    e.put(kPkH, pk.h.serialize());
    e.put(kPkAt, pk.a_t.serialize());
    return std::move(e).take();
}

Bytes encode(const MasterKey& mk) {
    Envelope e(kMagicMaster);
    e.put(kMkBeta, mk.beta.to_bytes());
    e.put(kMkGAlpha, mk.g_alpha.serialize());
    e.put(kMkQ, mk.q.to_bytes());
    e.put(kMkDigest, mk.pk_digest);
    return std::move(e).take();
}

Bytes encode(const AttributeKey& sk) {
    Envelope e(kMagicSecret);
    e.put(kSkDigest, sk.pk_digest);
    e.put(kSkD, sk.d.serialize());
    e.put(kSkDHat, sk.d_hat.serialize());
    for (const auto& [att, c] : sk.components) {
        ByteWriter w;
        w.str16(to_bytes(att));
        w.raw(c.d.serialize());
        w.raw(c.d_prime.serialize());
        e.put(kSkComponent, w.bytes());
    }
    return std::move(e).take();
}

Bytes encode(const Ciphertext& ct) {
    Envelope e(kMagicCiphertext);
    e.put(kCtManifest, ct.manifest.serialize());
    for (const auto& b : ct.blocks) e.put(kCtBlock, b.serialize());
    return std::move(e).take();
}

PublicParams decode_public(ByteView bytes) {
    Records r(bytes, kMagicPublic, {kPkDst, kPkG, kPkH, kPkAt}, {});
    PublicParams pk;
    const ByteView dst = r.get(kPkDst);
    pk.hash_dst.assign(dst.begin(), dst.end());
    pk.g = SourceElement::deserialize(r.get(kPkG));
    pk.h = SourceElement::deserialize(r.get(kPkH));
    pk.a_t = TargetElement::deserialize(r.get(kPkAt));
    if (!pk.g.has_g1() || !pk.h.has_g1() || pk.g.is_identity())
        throw DecodeError("public parameters need non-trivial generator images");
    return pk;
}

MasterKey decode_master(ByteView bytes) {
    Records r(bytes, kMagicMaster, {kMkBeta, kMkGAlpha, kMkQ, kMkDigest}, {});
    MasterKey mk;
    mk.beta = Scalar::from_bytes(r.get(kMkBeta));
    mk.g_alpha = SourceElement::deserialize(r.get(kMkGAlpha));
    mk.q = Scalar::from_bytes(r.get(kMkQ));
    mk.pk_digest = to_digest(r.get(kMkDigest));
    if (mk.beta.is_zero() || mk.q.is_zero()) throw DecodeError("master key has a zero exponent");
    return mk;
}

AttributeKey decode_secret(ByteView bytes) {
    Records r(bytes, kMagicSecret, {kSkDigest, kSkD, kSkDHat}, {kSkComponent});
    AttributeKey sk;
    sk.pk_digest = to_digest(r.get(kSkDigest));
    sk.d = SourceElement::deserialize(r.get(kSkD));
    sk.d_hat = SourceElement::deserialize(r.get(kSkDHat));
    for (ByteView v : r.all(kSkComponent)) {
        ByteReader c(v);
        const ByteView att = c.str16();
        AttributeComponent comp{SourceElement::deserialize(c.raw(SourceElement::kBytes)),
                                SourceElement::deserialize(c.raw(SourceElement::kBytes))};
        c.expect_done("key component");
        if (!sk.components.emplace(std::string(att.begin(), att.end()), comp).second)
            throw DecodeError("attribute listed twice in key");
    }
    if (sk.components.empty()) throw DecodeError("key has no attributes");
    return sk;
}

Ciphertext decode_ciphertext(ByteView bytes) {
    Records r(bytes, kMagicCiphertext, {kCtManifest}, {kCtBlock});
    Ciphertext ct;
    ct.manifest = Manifest::deserialize(r.get(kCtManifest));
    for (ByteView v : r.all(kCtBlock))
        ct.blocks.push_back(CiphertextBlock::deserialize(v, ct.manifest.tree_length));
    return ct;
}

std::string_view sniff(ByteView bytes) {
    if (bytes.size() < 4) return {};
    const std::string_view head(reinterpret_cast<const char*>(bytes.data()), 4);
    for (auto m : {kMagicPublic, kMagicMaster, kMagicSecret, kMagicCiphertext})
        if (head == m) return m;
    return {};
}

}  // namespace pcpabe::wire
