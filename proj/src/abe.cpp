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
#include "pcpabe/abe.hpp"

#include <stdexcept>

namespace pcpabe {

// --- key material ----------------------------------------------------------

Digest PublicParams::digest() const {
    ByteWriter w;
    w.str16(as_view(hash_dst));
    w.raw(g.serialize());
    w.raw(h.serialize());
    w.raw(a_t.serialize());
    return tagged_hash("pcpabe/public-params", w.bytes());
}

SourceElement PublicParams::hash_attribute(std::string_view attribute) const {
    return hash_to_group(as_view(attribute), hash_dst);
}

AttributeSet AttributeKey::attributes() const {
    AttributeSet out;
    for (const auto& [att, _] : components) out.insert(att);
    return out;
}

bool AttributeKey::holds(std::string_view attribute) const {
    return components.find(std::string(attribute)) != components.end();
}

AttributeKey AttributeKey::restricted_to(const AttributeSet& attrs) const {
    AttributeKey out{d, d_hat, {}, pk_digest};
    for (const auto& att : attrs) {
        auto it = components.find(att);
        if (it != components.end()) out.components.insert(*it);
    }
    return out;
}

std::pair<PublicParams, MasterKey> setup(Rng& rng, unsigned security_bits) {
    if (security_bits != 128)
        throw std::invalid_argument("setup: only 128-bit security (BLS12-381) is supported");
    const Scalar alpha = Scalar::random_nonzero(rng);
    const Scalar beta = Scalar::random_nonzero(rng);
    const Scalar q = Scalar::random_nonzero(rng);
    PublicParams pk;
    pk.g = SourceElement::generator();
    pk.h = pk.g.pow(beta);
    MasterKey mk;
    mk.beta = beta;
    mk.g_alpha = pk.g.pow(alpha);
    mk.q = q;
    pk.a_t = pair(mk.g_alpha, pk.g);
    mk.pk_digest = pk.digest();
    return {std::move(pk), std::move(mk)};
}

AttributeKey keygen_with(const PublicParams& pk, const MasterKey& mk, const AttributeSet& attrs,
                         const Scalar& r, Rng& rng) {
    if (attrs.empty()) throw std::invalid_argument("keygen: empty attribute set");
    if (mk.pk_digest != pk.digest())
        throw std::invalid_argument("keygen: master key belongs to different public parameters");
    AttributeKey sk;
    sk.pk_digest = mk.pk_digest;
    const SourceElement g_r = pk.g.pow(r);
    sk.d = (mk.g_alpha * g_r).pow(mk.beta.inverse());
    sk.d_hat = pk.g.pow(r * mk.q);
    for (const auto& att : attrs) {
        if (att.empty()) throw std::invalid_argument("keygen: empty attribute");
        const Scalar r_j = Scalar::random(rng);
        sk.components.emplace(att,
                              AttributeComponent{g_r * pk.hash_attribute(att).pow(r_j), pk.g.pow(r_j)});
    }
    return sk;
}

AttributeKey keygen(const PublicParams& pk, const MasterKey& mk, const AttributeSet& attrs, Rng& rng) {
    const Scalar r = Scalar::random(rng);
    return keygen_with(pk, mk, attrs, r, rng);
}

bool key_well_formed(const PublicParams& pk, const AttributeKey& sk) {
    std::optional<TargetElement> g_r;
    for (const auto& [att, c] : sk.components) {
        const TargetElement v = pair_ratio(c.d, pk.g, c.d_prime, pk.hash_attribute(att));
        if (g_r && !(*g_r == v)) return false;
        g_r = v;
    }
    return true;
}

// --- wire formats ----------------------------------------------------------

namespace {

void put(ByteWriter& w, const SourceElement& e) { w.raw(e.serialize()); }

SourceElement get_element(ByteReader& r) { return SourceElement::deserialize(r.raw(SourceElement::kBytes)); }

constexpr std::size_t kLeafRecordBytes = 2 + 2 * SourceElement::kBytes;

}  // namespace

Bytes CiphertextBlock::serialize() const {
    ByteWriter w;
    w.raw(id);
    w.u32(index);
    put(w, c_prime);
    w.u8(delta ? 1 : 0);
    if (delta) put(w, *delta);
    w.u16(static_cast<std::uint16_t>(leaves.size()));
    for (const auto& leaf : leaves) {
        w.u16(leaf.index);
        put(w, leaf.c_hat);
        put(w, leaf.c_hat_prime);
    }
    w.blob32(payload);
    if (table) w.raw(table->serialize());
    return std::move(w).take();
}

CiphertextBlock CiphertextBlock::deserialize(ByteView bytes, std::size_t id_length) {
    ByteReader r(bytes);
    CiphertextBlock b;
    auto id = r.raw(id_length);
    b.id.assign(id.begin(), id.end());
    b.index = r.u32();
    b.c_prime = get_element(r);
    const std::uint8_t flag = r.u8();
    if (flag > 1) throw DecodeError("block: bad delta flag");
    if (flag) b.delta = get_element(r);
    const std::uint16_t count = r.u16();
    for (std::uint16_t i = 0; i < count; ++i) {
        LeafComponent leaf;
        leaf.index = r.u16();
        leaf.c_hat = get_element(r);
        leaf.c_hat_prime = get_element(r);
        b.leaves.push_back(std::move(leaf));
    }
    auto payload = r.blob32();
    b.payload.assign(payload.begin(), payload.end());
    if (!r.done()) b.table = MaskedPointTable::deserialize(r.raw(r.remaining()));
    return b;
}

std::vector<std::uint64_t> Manifest::block_offsets() const {
    std::vector<std::uint64_t> out;
    std::uint64_t off = 0;
    for (auto s : block_sizes) {
        out.push_back(off);
        off += s;
    }
    return out;
}

Bytes Manifest::serialize() const {
    ByteWriter w;
    w.u8(kManifestVersion);
    w.u32(n);
    w.u32(tree_length);
    w.u64(block_length);
    w.raw(pk_digest);
    for (const auto& id : ids) w.raw(id);
    for (auto s : block_sizes) w.u64(s);
    w.blob32(table.serialize());
    return std::move(w).take();
}

Manifest Manifest::deserialize(ByteView bytes) {
    ByteReader r(bytes);
    if (r.u8() != kManifestVersion) throw DecodeError("manifest: unknown version");
    Manifest m;
    m.n = r.u32();
    m.tree_length = r.u32();
    m.block_length = r.u64();
    if (m.n == 0) throw DecodeError("manifest: zero blocks");
    if (m.tree_length == 0 || static_cast<std::uint64_t>(m.n) * (m.tree_length + 8ULL) > r.remaining())
        throw DecodeError("manifest: layout exceeds input");
    auto d = r.raw(32);
    std::copy(d.begin(), d.end(), m.pk_digest.begin());
    for (std::uint32_t i = 0; i < m.n; ++i) {
        auto id = r.raw(m.tree_length);
        m.ids.emplace_back(id.begin(), id.end());
    }
    for (std::uint32_t i = 0; i < m.n; ++i) m.block_sizes.push_back(r.u64());
    m.table = MaskedPointTable::deserialize(r.blob32());
    r.expect_done("manifest");
    return m;
}

std::uint64_t block_wire_size(std::size_t tree_length, const SubTreePolicy& sub,
                              std::uint64_t block_length, const MaskedPointTable* table) {
    std::uint64_t size = tree_length + 4 + SourceElement::kBytes + 1;
    if (sub.parent_block) size += SourceElement::kBytes;
    size += 2 + sub.leaves.size() * kLeafRecordBytes;
    size += 4 + block_length + kEmbeddedElementBytes + kAeadTagBytes;
    if (table) size += table->serialize().size();
    return size;
}

// --- encryption ------------------------------------------------------------

Bytes payload_aad(std::uint32_t index, ByteView id) {
    ByteWriter w;
    w.raw(as_view("pcpabe/block"));
    w.u32(index);
    w.raw(id);
    return std::move(w).take();
}

PayloadKey derive_payload_key(const TargetElement& mask, std::uint32_t index, ByteView id) {
    const Bytes okm = hkdf_sha256(mask.serialize(), as_view("pcpabe/payload-kdf"),
                                  payload_aad(index, id), kAeadKeyBytes + kAeadNonceBytes);
    return {Bytes(okm.begin(), okm.begin() + kAeadKeyBytes), Bytes(okm.begin() + kAeadKeyBytes, okm.end())};
}

SealedBlock encrypt_block(const PublicParams& pk, const MasterKey& mk, const SubTreePolicy& sub,
                          ByteView db, const ShareAssignment<Scalar>& shares, Bytes id,
                          const std::optional<Scalar>& s_parent, Rng& rng) {
    if (sub.parent_block.has_value() != s_parent.has_value())
        throw std::invalid_argument("encrypt_block: s_parent required exactly for non-root blocks");
    const Scalar& q_i = shares.share.at(sub.interior_node);
    const Scalar q_inv = mk.q.inverse();

    SealedBlock out;
    out.s = Scalar::random_nonzero(rng);
    CiphertextBlock& b = out.block;
    b.id = std::move(id);
    b.index = static_cast<std::uint32_t>(sub.block);
    b.c_prime = pk.h.pow(q_i);
    if (s_parent) b.delta = pk.g.pow((*s_parent - q_i) * q_inv);
    for (const auto& leaf : sub.leaves) {
        const Scalar& q_y = shares.share.at(leaf.node);
        b.leaves.push_back({leaf.index, pk.g.pow(q_y), pk.hash_attribute(leaf.attribute).pow(q_y)});
    }

    const SourceElement e = pk.g.pow(out.s * q_inv);
    Bytes plain(db.begin(), db.end());
    const auto e_bytes = e.serialize();
    plain.insert(plain.end(), e_bytes.begin(), e_bytes.end());
    const TargetElement mask = pk.a_t.pow(q_i);
    const PayloadKey key = derive_payload_key(mask, b.index, b.id);
    b.payload = aead_seal(key.key, key.nonce, payload_aad(b.index, b.id), plain);
    return out;
}

Encryptor::Encryptor(const PublicParams& pk, const MasterKey& mk, ByteView message,
                     const AccessTree& tree, Rng& rng)
    : pk_(pk), mk_(mk), rng_(rng) {
    if (mk.pk_digest != pk.digest())
        throw std::invalid_argument("encrypt: master key belongs to different public parameters");
    subs_ = enumerate_blocks(tree);
    const std::size_t n = subs_.size();

    shares_ = assign_shares(tree, Scalar::random_nonzero(rng), rng);
    data_ = chain(partition(message, n));

    const SerializedTree serialized = canonical_serialize(tree);
    ids_ = xor_share_ids(serialized, n, rng);

    sets_ = root_branch_partition(tree);
    const unsigned k = tree.root().threshold;
    const unsigned t = static_cast<unsigned>(tree.root().children.size());
    const auto limbs = bytes_to_limbs(ids_.last);
    const auto points = shamir_split<Scalar>(limbs, k, t, rng);

    manifest_.n = static_cast<std::uint32_t>(n);
    manifest_.tree_length = static_cast<std::uint32_t>(serialized.size());
    manifest_.block_length = data_.front().bytes.size();
    manifest_.pk_digest = pk.digest();
    manifest_.ids = ids_.ids;
    manifest_.table = build_point_table(sets_, points, k);
    for (const auto& sub : subs_)
        manifest_.block_sizes.push_back(block_wire_size(serialized.size(), sub, manifest_.block_length,
                                                        sub.block == n ? &manifest_.table : nullptr));
}

CiphertextBlock Encryptor::seal_next() {
    if (done()) throw std::logic_error("Encryptor: all blocks already sealed");
    const SubTreePolicy& sub = subs_[next_];
    std::optional<Scalar> s_parent;
    if (sub.parent_block) s_parent = block_s_.at(*sub.parent_block - 1);
    SealedBlock sealed = encrypt_block(pk_, mk_, sub, data_[next_].bytes, shares_, ids_.ids[next_],
                                       s_parent, rng_);
    block_s_.push_back(sealed.s);
    if (sub.block == subs_.size()) sealed.block.table = manifest_.table;
    ++next_;
    return std::move(sealed.block);
}

Ciphertext encrypt(const PublicParams& pk, const MasterKey& mk, ByteView message,
                   const AccessTree& tree, Rng& rng) {
    Encryptor enc(pk, mk, message, tree, rng);
    Ciphertext ct;
    ct.manifest = enc.manifest();
    while (!enc.done()) ct.blocks.push_back(enc.seal_next());
    return ct;
}

}  // namespace pcpabe
