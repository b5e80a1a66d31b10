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
#include <algorithm>
#include <deque>
#include <functional>

#include "pcpabe/abe.hpp"

namespace pcpabe {

std::string Refusal::label() const {
    switch (stage) {
        case Stage::kAttCheck: return "att_check";
        case Stage::kIntegrity: return "integrity";
        case Stage::kBlock: return "block " + std::to_string(block);
    }
    return "unknown";
}

namespace {

Refusal at_block(std::size_t block, std::string why) { return {Stage::kBlock, block, std::move(why)}; }
Refusal at_integrity(std::string why) { return {Stage::kIntegrity, 0, std::move(why)}; }

Outcome<BlockPlain> open_payload(const CiphertextBlock& block, const TargetElement& mask) {
    const PayloadKey key = derive_payload_key(mask, block.index, block.id);
    auto plain = aead_open(key.key, key.nonce, payload_aad(block.index, block.id), block.payload);
    if (!plain) return at_block(block.index, "payload authentication failed");
    if (plain->size() < kEmbeddedElementBytes) return at_block(block.index, "payload too short");
    const auto split = plain->end() - static_cast<std::ptrdiff_t>(kEmbeddedElementBytes);
    try {
        BlockPlain out{Bytes(plain->begin(), split),
                       SourceElement::deserialize(ByteView(&*split, kEmbeddedElementBytes))};
        return out;
    } catch (const DecodeError& e) {
        return at_block(block.index, std::string("embedded element: ") + e.what());
    }
}

}  // namespace

// --- pre-checks --------------------------------------------------------------

Outcome<Bytes> att_check(const MaskedPointTable& table, const AttributeSet& attrs,
                         std::size_t tree_length) {
    auto points = lookup_points(table, attrs);
    if (points.size() < table.k)
        return Refusal{Stage::kAttCheck, 0,
                       "attributes reach " + std::to_string(points.size()) + " of the " +
                           std::to_string(table.k) + " required root branches"};
    std::vector<Scalar> limbs;
    try {
        limbs = shamir_recover(std::move(points), table.k);
    } catch (const std::exception& e) {
        return Refusal{Stage::kAttCheck, 0, e.what()};
    }
    if (limbs.size() != (tree_length + kLimbBytes - 1) / kLimbBytes)
        return Refusal{Stage::kAttCheck, 0, "recovered share has the wrong length"};
    // A wrong reconstruction is passed on as-is; the integrity digest rejects it.
    Bytes out;
    for (std::size_t i = 0; i < limbs.size(); ++i) {
        const std::size_t width = std::min(kLimbBytes, tree_length - i * kLimbBytes);
        const auto be = limbs[i].to_bytes();
        out.insert(out.end(), be.end() - static_cast<std::ptrdiff_t>(width), be.end());
    }
    return out;
}

Outcome<AccessTree> ctb_integrity(std::span<const Bytes> ids, ByteView last) {
    try {
        const Bytes t = xor_recover(ids, last);
        return parse_serialized(t);
    } catch (const std::exception& e) {
        return at_integrity(std::string("ids do not recombine to a valid tree: ") + e.what());
    }
}

// --- the decryption subroutines ---------------------------------------------

Outcome<TargetElement> decrypt_leaf(const CiphertextBlock& block, const AttributeKey& sk,
                                    const LeafChild& z) {
    auto comp = sk.components.find(z.attribute);
    if (comp == sk.components.end()) return at_block(block.index, "attribute not held: " + z.attribute);
    auto leaf = std::find_if(block.leaves.begin(), block.leaves.end(),
                             [&](const LeafComponent& c) { return c.index == z.index; });
    if (leaf == block.leaves.end())
        return at_block(block.index, "no leaf component with index " + std::to_string(z.index));
    return pair_ratio(comp->second.d, leaf->c_hat, comp->second.d_prime, leaf->c_hat_prime);
}

Outcome<TargetElement> decrypt_interior(const std::map<std::uint16_t, TargetElement>& child_values,
                                        std::uint16_t threshold) {
    if (threshold == 0 || child_values.size() < threshold)
        return at_block(0, std::to_string(child_values.size()) + " child values, threshold " +
                               std::to_string(threshold));
    std::vector<Scalar> xs;
    for (auto it = child_values.begin(); xs.size() < threshold; ++it) xs.push_back(Scalar::from_u64(it->first));
    TargetElement acc;
    const Scalar one = Scalar::from_u64(1);
    auto it = child_values.begin();
    for (const auto& x : xs) {
        const Scalar coeff = lagrange_coeff<Scalar>(x, xs, Scalar{});
        acc = acc * (coeff == one ? it->second : it->second.pow(coeff));
        ++it;
    }
    return acc;
}

Outcome<BlockPlain> ctb_abe_dec(const CiphertextBlock& block, const AttributeKey& sk,
                                const TargetElement& f_i) {
    // e(h^{q_i}, g^{(alpha + r)/beta}) / e(g,g)^{r q_i} = e(g,g)^{alpha q_i}
    const TargetElement mask = pair(block.c_prime, sk.d) / f_i;
    return open_payload(block, mask);
}

Outcome<BlockPlain> ctb_sym_dec(const CiphertextBlock& block, const SourceElement& e_parent,
                                const AttributeKey& sk) {
    if (!block.delta) return at_block(block.index, "block carries no delta; it has no parent");
    // E = g^{s_j/q} / g^{(s_j - q_i)/q} = g^{q_i/q};  e(E, g^{r q}) = e(g,g)^{r q_i}
    const SourceElement e = e_parent / *block.delta;
    const TargetElement mask = pair_ratio(block.c_prime, sk.d, e, sk.d_hat);
    return open_payload(block, mask);
}

// --- session -----------------------------------------------------------------

DecryptSession::DecryptSession(const PublicParams& pk, const AttributeKey& sk, Manifest manifest)
    : pk_(pk), sk_(sk), manifest_(std::move(manifest)) {}

Refusal DecryptSession::fail(Refusal r) {
    failed_ = r;
    return r;
}

std::optional<Refusal> DecryptSession::begin() {
    if (begun_) throw std::logic_error("DecryptSession::begin called twice");
    begun_ = true;
    const Digest pkd = pk_.digest();
    if (manifest_.pk_digest != pkd || sk_.pk_digest != pkd)
        return fail(at_integrity("ciphertext, key and public parameters do not match"));
    if (manifest_.ids.size() != manifest_.n || manifest_.block_sizes.size() != manifest_.n)
        return fail(at_integrity("manifest lists the wrong number of ids"));

    auto last = att_check(manifest_.table, sk_.attributes(), manifest_.tree_length);
    if (!last) return fail(last.refusal());
    auto tree = ctb_integrity(manifest_.ids, last.value());
    if (!tree) return fail(tree.refusal());
    tree_ = std::move(tree.value());
    try {
        subs_ = enumerate_blocks(*tree_);
    } catch (const std::exception& e) {
        return fail(at_integrity(e.what()));
    }
    if (subs_.size() != manifest_.n) return fail(at_integrity("tree and manifest disagree on n"));
    slots_.assign(manifest_.n, Slot{});
    return std::nullopt;
}

Outcome<ConsumeReport> DecryptSession::consume(CiphertextBlock block) {
    if (!begun_) throw std::logic_error("DecryptSession::consume before begin");
    if (failed_) return *failed_;
    const std::size_t i = block.index;
    if (i < 1 || i > slots_.size()) return fail(at_integrity("block index out of range"));
    Slot& slot = slots_[i - 1];
    if (slot.block) return fail(at_integrity("block " + std::to_string(i) + " received twice"));
    if (block.id != manifest_.ids[i - 1])
        return fail(at_integrity("block " + std::to_string(i) + " id does not match the manifest"));

    const SubTreePolicy& sub = subs_[i - 1];
    bool shape_ok = block.delta.has_value() == sub.parent_block.has_value() &&
                    block.leaves.size() == sub.leaves.size() &&
                    block.table.has_value() == (i == slots_.size());
    for (std::size_t j = 0; shape_ok && j < sub.leaves.size(); ++j)
        shape_ok = block.leaves[j].index == sub.leaves[j].index;
    if (shape_ok && block.table) shape_ok = *block.table == manifest_.table;
    if (!shape_ok) return fail(at_integrity("block " + std::to_string(i) + " does not match its sub-tree"));

    ConsumeReport report;
    slot.block = std::move(block);
    for (const auto& z : sub.leaves) {
        if (!sk_.holds(z.attribute)) continue;
        auto f = decrypt_leaf(*slot.block, sk_, z);
        ++report.leaf_pairings;
        if (f) slot.child_values.emplace(z.index, std::move(f.value()));
    }
    if (auto r = settle(i, report)) return *r;
    return report;
}

std::optional<Refusal> DecryptSession::settle(std::size_t start, ConsumeReport& report) {
    std::deque<std::size_t> work{start};
    while (!work.empty()) {
        const std::size_t b = work.front();
        work.pop_front();
        Slot& slot = slots_[b - 1];
        const SubTreePolicy& sub = subs_[b - 1];

        // Interior value from leaves and child blocks; feeds the parent's recombination.
        if (!slot.f && slot.child_values.size() >= sub.threshold) {
            auto f = decrypt_interior(slot.child_values, sub.threshold);
            report.lagrange_terms += sub.threshold;
            slot.f = std::move(f.value());
            if (sub.parent_block) {
                const std::uint16_t index = tree_->node(sub.interior_node).index;
                slots_[*sub.parent_block - 1].child_values.emplace(index, *slot.f);
                work.push_back(*sub.parent_block);
            }
        }
        if (!slot.block || slot.path) continue;

        std::optional<Outcome<BlockPlain>> opened;
        DecryptPath path = DecryptPath::kAbe;
        if (slot.f) {
            opened = ctb_abe_dec(*slot.block, sk_, *slot.f);
        } else if (sub.parent_block && slots_[*sub.parent_block - 1].e) {
            path = DecryptPath::kSym;
            opened = ctb_sym_dec(*slot.block, *slots_[*sub.parent_block - 1].e, sk_);
        }
        if (!opened) continue;
        if (!*opened) return fail(opened->refusal());

        slot.e = opened->value().e;
        slot.path = path;
        plain_.push_back({b, std::move(opened->value().db)});
        report.unlocked.push_back({b, path});
        for (const auto& c : sub.interiors) work.push_back(c.block);
    }
    return std::nullopt;
}

std::optional<DecryptPath> DecryptSession::path_of(std::size_t block) const {
    if (block < 1 || block > slots_.size()) return std::nullopt;
    return slots_[block - 1].path;
}

Outcome<Bytes> DecryptSession::finish() {
    if (!begun_) throw std::logic_error("DecryptSession::finish before begin");
    if (failed_) return *failed_;
    for (std::size_t i = 0; i < slots_.size(); ++i)
        if (!slots_[i].block) return fail(at_integrity("block " + std::to_string(i + 1) + " is missing"));
    if (!slots_.front().path) return fail(at_block(1, "root sub-tree not satisfied by the key"));
    for (std::size_t i = 0; i < slots_.size(); ++i)
        if (!slots_[i].path) return fail(at_block(i + 1, "block could not be opened"));
    try {
        return reassemble(unchain(plain_));
    } catch (const std::exception& e) {
        return fail(at_block(1, std::string("reassembly: ") + e.what()));
    }
}

Outcome<Bytes> decrypt(const PublicParams& pk, const AttributeKey& sk, const Ciphertext& ct) {
    DecryptSession session(pk, sk, ct.manifest);
    if (auto r = session.begin()) return *r;
    for (const auto& b : ct.blocks) {
        auto step = session.consume(b);
        if (!step) return step.refusal();
    }
    return session.finish();
}

// --- monolithic baseline -------------------------------------------------------

std::uint64_t MonolithicCiphertext::wire_size() const {
    return canonical_serialize(tree).size() + SourceElement::kBytes + 2 +
           leaves.size() * (2 + 2 * SourceElement::kBytes) + 4 + payload.size();
}

MonolithicCiphertext encrypt_monolithic(const PublicParams& pk, ByteView message,
                                        const AccessTree& tree, Rng& rng) {
    const Scalar s = Scalar::random_nonzero(rng);
    const auto shares = assign_shares(tree, s, rng);
    MonolithicCiphertext ct{tree, pk.h.pow(s), {}, {}};
    for (const Node& n : tree.nodes()) {
        if (!n.is_leaf()) continue;
        const Scalar& q_y = shares.share.at(n.id);
        ct.leaves.emplace(n.id, LeafComponent{n.index, pk.g.pow(q_y), pk.hash_attribute(n.attribute).pow(q_y)});
    }
    const PayloadKey key = derive_payload_key(pk.a_t.pow(s), 1, {});
    ct.payload = aead_seal(key.key, key.nonce, payload_aad(1, {}), message);
    return ct;
}

Outcome<Bytes> decrypt_monolithic(const PublicParams& pk, const AttributeKey& sk,
                                  const MonolithicCiphertext& ct) {
    (void)pk;
    std::function<std::optional<TargetElement>(NodeId)> eval = [&](NodeId id) -> std::optional<TargetElement> {
        const Node& n = ct.tree.node(id);
        if (n.is_leaf()) {
            auto comp = sk.components.find(n.attribute);
            if (comp == sk.components.end()) return std::nullopt;
            const LeafComponent& c = ct.leaves.at(id);
            return pair_ratio(comp->second.d, c.c_hat, comp->second.d_prime, c.c_hat_prime);
        }
        std::map<std::uint16_t, TargetElement> values;
        for (auto c : n.children) {
            if (values.size() >= n.threshold) break;
            if (auto f = eval(c)) values.emplace(ct.tree.node(c).index, std::move(*f));
        }
        auto f = decrypt_interior(values, n.threshold);
        if (!f) return std::nullopt;
        return f.value();
    };
    auto root = eval(ct.tree.root_id());
    if (!root) return at_block(1, "key does not satisfy the policy");
    const TargetElement mask = pair(ct.c_prime, sk.d) / *root;
    const PayloadKey key = derive_payload_key(mask, 1, {});
    auto plain = aead_open(key.key, key.nonce, payload_aad(1, {}), ct.payload);
    if (!plain) return at_block(1, "payload authentication failed");
    return std::move(*plain);
}

}  // namespace pcpabe
