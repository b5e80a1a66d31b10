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

#include <doctest.h>

#include "pcpabe/abe.hpp"
#include "support.hpp"

using namespace pcpabe;
using pcpabe::testing::block_values;

namespace {

struct Fixture {
    Rng rng = Rng::seeded(41);
    PublicParams pk;
    MasterKey mk;
    TargetElement gt;  // e(g, g)

    Fixture() {
        std::tie(pk, mk) = setup(rng);
        gt = pair(pk.g, pk.g);
    }

    Ciphertext encrypt_with(Encryptor& enc) {
        Ciphertext ct{enc.manifest(), {}};
        while (!enc.done()) ct.blocks.push_back(enc.seal_next());
        return ct;
    }
};

Bytes flip(Bytes b, std::size_t bit) {
    b.at(bit / 8) ^= static_cast<std::uint8_t>(1u << (bit % 8));
    return b;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "setup identities") {
    CHECK(pk.a_t == pair(pk.g, mk.g_alpha));
    CHECK(pair(pk.g, pk.h) == gt.pow(mk.beta));
    CHECK(mk.pk_digest == pk.digest());
    const auto [pk2, mk2] = setup(rng);
    CHECK_FALSE(pk2.h == pk.h);
    CHECK(pk2.digest() != pk.digest());
    CHECK_THROWS_AS(setup(rng, 256), std::invalid_argument);
}

TEST_CASE_FIXTURE(Fixture, "key generation") {
    const Scalar r = Scalar::random_nonzero(rng);
    const AttributeKey sk = keygen_with(pk, mk, {"A", "B"}, r, rng);
    CHECK(key_well_formed(pk, sk));
    CHECK(pair(sk.d, pk.h) == pk.a_t * gt.pow(r));
    CHECK(sk.d_hat == pk.g.pow(r * mk.q));
    CHECK(pair(sk.d_hat, pk.g) == gt.pow(r * mk.q));
    CHECK(sk.attributes() == AttributeSet{"A", "B"});

    const AttributeKey other = keygen(pk, mk, {"A", "B"}, rng);
    CHECK_FALSE(other.d == sk.d);
    CHECK_FALSE(other.components.at("A").d == sk.components.at("A").d);

    AttributeKey bad = sk;
    bad.components.at("A").d_prime = pk.g;
    CHECK_FALSE(key_well_formed(pk, bad));

    const AttributeKey only_a = sk.restricted_to({"A"});
    CHECK(only_a.attributes() == AttributeSet{"A"});
    CHECK(key_well_formed(pk, only_a));
    CHECK(only_a.d == sk.d);

    CHECK_THROWS_AS(keygen(pk, mk, {}, rng), std::invalid_argument);
    const auto [pk2, mk2] = setup(rng);
    CHECK_THROWS_AS(keygen(pk2, mk, {"A"}, rng), std::invalid_argument);
}

TEST_CASE_FIXTURE(Fixture, "single gate ciphertext structure") {
    const AccessTree tree = parse_policy("A and B");
    Encryptor enc(pk, mk, to_bytes("payload"), tree, rng);
    const Ciphertext ct = encrypt_with(enc);
    REQUIRE(ct.blocks.size() == 1);
    const auto& b = ct.blocks[0];
    CHECK(b.index == 1);
    CHECK_FALSE(b.delta);
    REQUIRE(b.table);
    CHECK(b.table->k == 2);
    CHECK(b.table->t == 2);
    CHECK(*b.table == ct.manifest.table);
    CHECK(b.leaves.size() == 2);
}

TEST_CASE_FIXTURE(Fixture, "two level ciphertext structure and exponents") {
    const AccessTree tree = parse_policy("(A and B) or (C and D)");
    Encryptor enc(pk, mk, rng.bytes(3000), tree, rng);
    const Ciphertext ct = encrypt_with(enc);
    REQUIRE(ct.blocks.size() == 3);
    CHECK_FALSE(ct.blocks[0].delta);
    CHECK(ct.blocks[1].delta);
    CHECK(ct.blocks[2].delta);
    CHECK_FALSE(ct.blocks[0].table);
    CHECK_FALSE(ct.blocks[1].table);
    REQUIRE(ct.blocks[2].table);
    CHECK(ct.blocks[2].table->k == 1);
    CHECK(ct.blocks[2].table->t == 2);
    CHECK(ct.manifest.n == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(ct.blocks[i].id == ct.manifest.ids[i]);

    const auto& shares = enc.shares();
    CHECK(shares.share.at(tree.root_id()) == shares.polynomial.at(tree.root_id()).coefficients().front());
    for (const auto& sub : enc.sub_trees()) {
        const auto& b = ct.blocks[sub.block - 1];
        const Scalar qi = shares.share.at(sub.interior_node);
        CHECK(b.c_prime == pk.h.pow(qi));
        for (const auto& leaf : b.leaves) {
            const auto it = std::find_if(sub.leaves.begin(), sub.leaves.end(),
                                         [&](const LeafChild& z) { return z.index == leaf.index; });
            REQUIRE(it != sub.leaves.end());
            const Scalar qz = shares.share.at(it->node);
            CHECK(leaf.c_hat == pk.g.pow(qz));
            CHECK(leaf.c_hat_prime == pk.hash_attribute(it->attribute).pow(qz));
        }
        if (sub.parent_block) {
            const Scalar s_parent = enc.block_secret(*sub.parent_block);
            CHECK(*b.delta == pk.g.pow((s_parent - qi) * mk.q.inverse()));
            CHECK(pair(*b.delta, pk.g).pow(mk.q) * gt.pow(qi) == gt.pow(s_parent));
        }
        // the payload opens under A_T^{q_i}
        const PayloadKey key = derive_payload_key(pk.a_t.pow(qi), b.index, b.id);
        const auto plain = aead_open(key.key, key.nonce, payload_aad(b.index, b.id), b.payload);
        REQUIRE(plain);
        const Bytes e(plain->end() - kEmbeddedElementBytes, plain->end());
        CHECK(SourceElement::deserialize(e) == pk.g.pow(enc.block_secret(sub.block) * mk.q.inverse()));
    }
}

TEST_CASE_FIXTURE(Fixture, "leaf and interior decryption") {
    const AccessTree tree = parse_policy("2 of (A, B, C, A)");
    Encryptor enc(pk, mk, to_bytes("x"), tree, rng);
    const Ciphertext ct = encrypt_with(enc);
    const Scalar r = Scalar::random_nonzero(rng);
    const AttributeKey sk = keygen_with(pk, mk, {"A", "B"}, r, rng);
    const auto& sub = enc.sub_trees().at(0);
    std::map<std::uint16_t, TargetElement> values;
    for (const auto& z : sub.leaves) {
        auto f = decrypt_leaf(ct.blocks[0], sk, z);
        if (z.attribute == "C") {
            CHECK_FALSE(f);
            continue;
        }
        REQUIRE(f);
        CHECK(f.value() == gt.pow(r * enc.shares().share.at(z.node)));
        values.emplace(z.index, f.value());
    }
    CHECK(values.size() == 3);  // both A leaves open with one D_A
    auto fi = decrypt_interior(values, 2);
    REQUIRE(fi);
    CHECK(fi.value() == gt.pow(r * enc.shares().share.at(tree.root_id())));
    CHECK(pair(ct.blocks[0].c_prime, sk.d) / fi.value() == pk.a_t.pow(enc.shares().share.at(tree.root_id())));

    CHECK_FALSE(decrypt_interior({{1, values.at(1)}}, 2));
    CHECK(decrypt_interior({{2, values.at(2)}}, 1).value() == values.at(2));
}

TEST_CASE_FIXTURE(Fixture, "block decryption paths") {
    const AccessTree tree = parse_policy("(A and B) or (C and D)");
    const Bytes msg = rng.bytes(777);
    Encryptor enc(pk, mk, msg, tree, rng);
    const Ciphertext ct = encrypt_with(enc);
    const AttributeKey sk = keygen(pk, mk, {"A", "B", "C", "D"}, rng);
    const auto f = block_values(ct, tree, sk);
    for (const auto& v : f) REQUIRE(v);

    const auto root = ctb_abe_dec(ct.blocks[0], sk, *f[0]);
    REQUIRE(root);
    for (std::size_t i = 1; i < 3; ++i) {
        const auto abe = ctb_abe_dec(ct.blocks[i], sk, *f[i]);
        const auto sym = ctb_sym_dec(ct.blocks[i], root.value().e, sk);
        REQUIRE(abe);
        REQUIRE(sym);
        CHECK(abe.value() == sym.value());
    }

    SUBCASE("wrong F") { CHECK_FALSE(ctb_abe_dec(ct.blocks[1], sk, f[1]->pow(Scalar::from_u64(2)))); }
    SUBCASE("tampered payload") {
        auto b = ct.blocks[1];
        b.payload = flip(b.payload, 5);
        CHECK_FALSE(ctb_abe_dec(b, sk, *f[1]));
    }
    SUBCASE("wrong parent E") {
        const auto child = ctb_abe_dec(ct.blocks[1], sk, *f[1]).value();
        CHECK_FALSE(ctb_sym_dec(ct.blocks[2], child.e, sk));
    }
    SUBCASE("no delta on block 1") { CHECK_FALSE(ctb_sym_dec(ct.blocks[0], root.value().e, sk)); }
    SUBCASE("spliced payload") {
        auto b = ct.blocks[1];
        b.payload = ct.blocks[2].payload;
        CHECK_FALSE(ctb_abe_dec(b, sk, *f[1]));
    }
}

TEST_CASE_FIXTURE(Fixture, "children open through the parent alone") {
    // root satisfied by E, children need C and D or A and B
    const AccessTree tree = parse_policy("E or (A and B) or (C and D)");
    const Bytes msg = rng.bytes(2000);
    Encryptor enc(pk, mk, msg, tree, rng);
    const Ciphertext ct = encrypt_with(enc);
    const AttributeKey sk = keygen(pk, mk, {"E"}, rng);
    const auto out = decrypt(pk, sk, ct);
    REQUIRE(out);
    CHECK(out.value() == msg);

    DecryptSession session(pk, sk, ct.manifest);
    REQUIRE_FALSE(session.begin());
    for (const auto& b : ct.blocks) REQUIRE(session.consume(b));
    CHECK(session.path_of(1) == DecryptPath::kAbe);
    CHECK(session.path_of(2) == DecryptPath::kSym);
    CHECK(session.path_of(3) == DecryptPath::kSym);
    CHECK(session.finish().value() == msg);
}

TEST_CASE_FIXTURE(Fixture, "filter passes but decryption refuses") {
    const AccessTree tree = parse_policy("(A and B) or (C and D)");
    const Ciphertext ct = encrypt(pk, mk, to_bytes("secret"), tree, rng);
    const AttributeKey sk = keygen(pk, mk, {"A", "C"}, rng);
    CHECK(att_check(ct.manifest.table, sk.attributes(), ct.manifest.tree_length));
    const auto out = decrypt(pk, sk, ct);
    REQUIRE_FALSE(out);
    CHECK(out.refusal().label() == "block 1");
}

TEST_CASE_FIXTURE(Fixture, "attribute pre-check") {
    const AccessTree tree = parse_policy("2 of (A and B, C, D)");
    const Ciphertext ct = encrypt(pk, mk, to_bytes("m"), tree, rng);
    const auto& table = ct.manifest.table;
    const auto len = ct.manifest.tree_length;
    const auto full = att_check(table, {"A", "C"}, len);
    REQUIRE(full);
    CHECK(ctb_integrity(ct.manifest.ids, full.value()).value() == tree);
    CHECK_FALSE(att_check(table, {"C"}, len));
    CHECK(att_check(table, {"C"}, len).refusal().label() == "att_check");
    CHECK_FALSE(att_check(table, {"C", "Z"}, len));
    CHECK_FALSE(att_check(table, {}, len));

    const AttributeKey sk = keygen(pk, mk, {"D", "Q"}, rng);
    const auto out = decrypt(pk, sk, ct);
    REQUIRE_FALSE(out);
    CHECK(out.refusal().label() == "att_check");
}

TEST_CASE_FIXTURE(Fixture, "attribute repeated across root branches") {
    for (const char* text : {"A and A", "(A and B) and (A or C)", "2 of (A, A and B, C)"}) {
        const AccessTree tree = parse_policy(text);
        const Bytes msg = rng.bytes(300);
        const Ciphertext ct = encrypt(pk, mk, msg, tree, rng);
        const AttributeKey full = keygen(pk, mk, {"A", "B", "C"}, rng);
        for (const auto& s : pcpabe::testing::all_subsets({"A", "B", "C"})) {
            if (s.empty()) continue;
            CHECK(decrypt(pk, full.restricted_to(s), ct).ok() == satisfies(tree, s));
        }
    }
}

TEST_CASE_FIXTURE(Fixture, "integrity check") {
    const AccessTree tree = parse_policy("(A and B) or (C and D)");
    const Ciphertext ct = encrypt(pk, mk, to_bytes("m"), tree, rng);
    const Bytes last = att_check(ct.manifest.table, {"A"}, ct.manifest.tree_length).value();
    CHECK(ctb_integrity(ct.manifest.ids, last).value() == tree);

    auto reordered = ct.manifest.ids;
    std::swap(reordered[0], reordered[2]);
    CHECK(ctb_integrity(reordered, last).value() == tree);

    for (std::size_t bit : {0, 9, 100}) {
        auto flipped = ct.manifest.ids;
        flipped[1] = flip(flipped[1], bit);
        const auto r = ctb_integrity(flipped, last);
        REQUIRE_FALSE(r);
        CHECK(r.refusal().label() == "integrity");
    }
    std::vector<Bytes> missing(ct.manifest.ids.begin(), ct.manifest.ids.end() - 1);
    CHECK_FALSE(ctb_integrity(missing, last));
}

TEST_CASE_FIXTURE(Fixture, "session refusals") {
    const AccessTree tree = parse_policy("(A and B) or (C and D)");
    const Bytes msg = rng.bytes(100);
    const Ciphertext ct = encrypt(pk, mk, msg, tree, rng);
    const AttributeKey sk = keygen(pk, mk, {"A", "B"}, rng);

    SUBCASE("missing block") {
        DecryptSession s(pk, sk, ct.manifest);
        REQUIRE_FALSE(s.begin());
        REQUIRE(s.consume(ct.blocks[0]));
        REQUIRE(s.consume(ct.blocks[1]));
        const auto out = s.finish();
        REQUIRE_FALSE(out);
        CHECK(out.refusal().label() == "integrity");
    }
    SUBCASE("duplicate block") {
        DecryptSession s(pk, sk, ct.manifest);
        REQUIRE_FALSE(s.begin());
        REQUIRE(s.consume(ct.blocks[0]));
        CHECK_FALSE(s.consume(ct.blocks[0]));
    }
    SUBCASE("id mismatch") {
        DecryptSession s(pk, sk, ct.manifest);
        REQUIRE_FALSE(s.begin());
        auto b = ct.blocks[1];
        b.id = flip(b.id, 3);
        const auto r = s.consume(b);
        REQUIRE_FALSE(r);
        CHECK(r.refusal().label() == "integrity");
    }
    SUBCASE("consume before begin") {
        DecryptSession s(pk, sk, ct.manifest);
        CHECK_THROWS(s.consume(ct.blocks[0]));
    }
    SUBCASE("foreign parameters") {
        const auto [pk2, mk2] = setup(rng);
        const AttributeKey other = keygen(pk2, mk2, {"A", "B"}, rng);
        CHECK_FALSE(decrypt(pk2, other, ct));
    }
}

TEST_CASE_FIXTURE(Fixture, "colluding keys cannot combine") {
    const AccessTree tree = parse_policy("A and B");
    const Ciphertext ct = encrypt(pk, mk, to_bytes("no"), tree, rng);
    const AttributeKey ka = keygen(pk, mk, {"A"}, rng);
    const AttributeKey kb = keygen(pk, mk, {"B"}, rng);
    CHECK_FALSE(decrypt(pk, ka, ct));
    CHECK_FALSE(decrypt(pk, kb, ct));
    AttributeKey merged = ka;
    merged.components.emplace("B", kb.components.at("B"));
    const auto out = decrypt(pk, merged, ct);
    REQUIRE_FALSE(out);
    CHECK(out.refusal().label() == "block 1");
}

TEST_CASE_FIXTURE(Fixture, "serialization") {
    const AccessTree tree = parse_policy("(A and B) or 2 of (C, D, E)");
    const Bytes msg = rng.bytes(1234);
    const Ciphertext ct = encrypt(pk, mk, msg, tree, rng);
    const Manifest m = Manifest::deserialize(ct.manifest.serialize());
    CHECK(m.serialize() == ct.manifest.serialize());
    CHECK(m.block_offsets().size() == m.n);
    const auto subs = enumerate_blocks(tree);
    for (std::size_t i = 0; i < ct.blocks.size(); ++i) {
        const Bytes wire = ct.blocks[i].serialize();
        CHECK(wire.size() == block_wire_size(m.tree_length, subs[i], m.block_length,
                                             ct.blocks[i].table ? &*ct.blocks[i].table : nullptr));
        CHECK(wire.size() == m.block_sizes[i]);
        CHECK(CiphertextBlock::deserialize(wire, m.tree_length).serialize() == wire);
        Bytes truncated(wire.begin(), wire.end() - 1);
        CHECK_THROWS_AS(CiphertextBlock::deserialize(truncated, m.tree_length), DecodeError);
    }
    Bytes bad = ct.manifest.serialize();
    bad[0] = 0x02;
    CHECK_THROWS_AS(Manifest::deserialize(bad), DecodeError);
}

TEST_CASE_FIXTURE(Fixture, "monolithic baseline") {
    const AccessTree tree = parse_policy("(A and B) or (C and D)");
    const Bytes msg = rng.bytes(4096);
    const auto ct = encrypt_monolithic(pk, msg, tree, rng);
    CHECK(ct.leaves.size() == 4);
    CHECK(decrypt_monolithic(pk, keygen(pk, mk, {"C", "D"}, rng), ct).value() == msg);
    CHECK_FALSE(decrypt_monolithic(pk, keygen(pk, mk, {"A", "C"}, rng), ct));
    CHECK(ct.wire_size() > msg.size());
}
