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

#include <set>

#include "pcpabe/policy.hpp"
#include "support.hpp"

using namespace pcpabe;
using pcpabe::testing::all_subsets;
using pcpabe::testing::oracle_satisfies;
using pcpabe::testing::random_tree;

TEST_CASE("parse: and, or, k of") {
    const AccessTree t = parse_policy("A and B");
    CHECK(t.root().threshold == 2);
    CHECK(t.root().children.size() == 2);
    CHECK(t.node(t.root().children[0]).attribute == "A");
    CHECK(t.node(t.root().children[0]).index == 1);
    CHECK(t.node(t.root().children[1]).attribute == "B");
    CHECK(t.node(t.root().children[1]).index == 2);

    const AccessTree k = parse_policy("2 of (A, B, C)");
    CHECK(k.root().threshold == 2);
    CHECK(k.root().children.size() == 3);

    const AccessTree o = parse_policy("A or B or C");
    CHECK(o.root().threshold == 1);
    CHECK(o.root().children.size() == 3);

    // and binds tighter than or
    const AccessTree p = parse_policy("A and B or C");
    CHECK(p.root().threshold == 1);
    CHECK(p.node(p.root().children[0]).threshold == 2);

    CHECK(parse_policy("a AND b Or c") == parse_policy("a and b or c"));
    CHECK(parse_policy("dept:eng.team-1_x")
              .root()
              .attribute == "dept:eng.team-1_x");
}

TEST_CASE("parse errors carry a kind and position") {
    auto kind_of = [](std::string_view text) {
        try {
            parse_policy(text);
        } catch (const PolicyError& e) {
            return std::pair{e.kind(), e.position()};
        }
        FAIL("no error for " << text);
        return std::pair{PolicyError::Kind::kSyntax, std::size_t{0}};
    };
    CHECK(kind_of("3 of (A, B)").first == PolicyError::Kind::kThreshold);
    CHECK(kind_of("0 of (A, B)").first == PolicyError::Kind::kThreshold);
    CHECK(kind_of("").first == PolicyError::Kind::kEmptyAttribute);
    CHECK(kind_of("A and").first == PolicyError::Kind::kEmptyAttribute);
    CHECK(kind_of("A and (B").first == PolicyError::Kind::kSyntax);
    CHECK(kind_of("A $ B") == std::pair{PolicyError::Kind::kSyntax, std::size_t{2}});
    CHECK(kind_of("A B").first == PolicyError::Kind::kSyntax);
    CHECK(kind_of("and").first != PolicyError::Kind::kThreshold);
    CHECK_THROWS_AS(AccessTree::leaf(""), std::invalid_argument);
    CHECK_THROWS_AS(AccessTree::gate(3, {AccessTree::leaf("A")}), std::invalid_argument);
}

TEST_CASE("to_string round trips") {
    auto rng = Rng::seeded(11);
    for (const char* text : {"A and B", "(A and B) or (C and D)", "2 of (A, B and C, D or E)", "1 of (A)"})
        CHECK(parse_policy(parse_policy(text).to_string()) == parse_policy(text));
    for (int i = 0; i < 200; ++i) {
        const AccessTree t = random_tree(rng, 12, 5);
        CHECK(parse_policy(t.to_string()) == t);
    }
}

TEST_CASE("enumerate blocks") {
    const auto one = enumerate_blocks(parse_policy("A and B"));
    REQUIRE(one.size() == 1);
    CHECK(one[0].block == 1);
    CHECK(one[0].leaves.size() == 2);
    CHECK_FALSE(one[0].parent_block);

    const AccessTree t = parse_policy("(A and B) or (C and D)");
    const auto three = enumerate_blocks(t);
    REQUIRE(three.size() == 3);
    CHECK(three[0].interiors.size() == 2);
    CHECK(three[0].leaves.empty());
    CHECK(three[0].interiors[0].block == 2);
    CHECK(three[0].interiors[1].block == 3);
    CHECK(three[1].parent_block == std::optional<std::size_t>(1));
    CHECK(three[2].leaves[0].attribute == "C");
    CHECK(three[2].leaves[1].index == 2);

    CHECK_THROWS_AS(enumerate_blocks(AccessTree::leaf("A")), std::invalid_argument);
    CHECK(enumerate_blocks(parse_policy("1 of (A)")).size() == 1);
}

TEST_CASE("block partition is complete and parents come first") {
    auto rng = Rng::seeded(12);
    for (int i = 0; i < 300; ++i) {
        const AccessTree t = random_tree(rng, 12, 6);
        const auto subs = enumerate_blocks(t);
        CHECK(subs.size() == t.gate_count());
        std::vector<int> seen(t.nodes().size(), 0);
        for (const auto& s : subs) {
            ++seen[s.interior_node];
            CHECK(s.block >= 1);
            if (s.block == 1) {
                CHECK(s.interior_node == t.root_id());
            } else {
                REQUIRE(s.parent_block);
                CHECK(*s.parent_block < s.block);
                CHECK(subs[*s.parent_block - 1].interior_node == *t.node(s.interior_node).parent);
            }
            CHECK(s.leaves.size() + s.interiors.size() == t.node(s.interior_node).children.size());
            CHECK(s.child_count == t.node(s.interior_node).children.size());
            for (const auto& l : s.leaves) ++seen[l.node];
            for (const auto& c : s.interiors) CHECK(subs[c.block - 1].interior_node == c.node);
        }
        // every gate appears once as an interior node; every leaf once as a child
        for (const Node& n : t.nodes()) CHECK(seen[n.id] == 1);
    }
}

TEST_CASE("canonical serialization") {
    const AccessTree a = parse_policy("A and B");
    const SerializedTree s = canonical_serialize(a);
    CHECK(parse_serialized(s.bytes()) == a);
    CHECK(canonical_serialize(AccessTree::all_of({AccessTree::leaf("A"), AccessTree::leaf("B")})).bytes() ==
          s.bytes());
    CHECK(s.bytes().size() == s.size());
    CHECK(s.digest == sha256(s.body));
    for (std::size_t bit = 0; bit < s.body.size() * 8; ++bit) {
        Bytes b = s.bytes();
        b[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        CHECK_THROWS_AS(parse_serialized(b), DecodeError);
    }
    CHECK_THROWS_AS(parse_serialized(ByteView(s.bytes()).first(10)), DecodeError);

    auto rng = Rng::seeded(13);
    for (int i = 0; i < 200; ++i) {
        const AccessTree t = random_tree(rng, 12, 5);
        const Bytes b = canonical_serialize(t).bytes();
        const AccessTree back = parse_serialized(b);
        CHECK(back == t);
        CHECK(canonical_serialize(back).bytes() == b);
    }
}

TEST_CASE("root branch partition") {
    using Sets = std::vector<std::vector<std::string>>;
    CHECK(root_branch_partition(parse_policy("(A and B) or (C and D)")) == Sets{{"A", "B"}, {"C", "D"}});
    CHECK(root_branch_partition(parse_policy("A or B")) == Sets{{"A"}, {"B"}});
    CHECK(root_branch_partition(parse_policy("(A and B) or (A and C)")) == Sets{{"A", "B"}, {"A", "C"}});
    CHECK(root_branch_partition(parse_policy("(A and B) or A")) == Sets{{"A", "B"}, {"A"}});
    CHECK(root_branch_partition(parse_policy("A and A")) == Sets{{"A"}, {"A"}});

    auto rng = Rng::seeded(14);
    for (int i = 0; i < 100; ++i) {
        const AccessTree t = random_tree(rng, 12, 5);
        const auto sets = root_branch_partition(t);
        CHECK(sets.size() == t.root().children.size());
        std::set<std::string> all;
        for (std::size_t j = 0; j < sets.size(); ++j) {
            std::set<std::string> under;
            std::vector<NodeId> stack{t.root().children[j]};
            while (!stack.empty()) {
                const Node& n = t.node(stack.back());
                stack.pop_back();
                if (n.is_leaf()) under.insert(n.attribute);
                stack.insert(stack.end(), n.children.begin(), n.children.end());
            }
            CHECK(sets[j] == std::vector<std::string>(under.begin(), under.end()));
            all.insert(sets[j].begin(), sets[j].end());
        }
        CHECK(std::vector<std::string>(all.begin(), all.end()) == t.attributes());
    }
}

TEST_CASE("satisfies") {
    CHECK(satisfies(parse_policy("A and B"), {"A", "B"}));
    CHECK_FALSE(satisfies(parse_policy("A and B"), {"A"}));
    CHECK(satisfies(parse_policy("2 of (A, B, C)"), {"B", "C"}));
    CHECK_FALSE(satisfies(parse_policy("(A and B) or (C and D)"), {"A", "C"}));

    auto rng = Rng::seeded(15);
    for (int i = 0; i < 200; ++i) {
        const AccessTree t = random_tree(rng, 12, 6, 6);
        for (const auto& s : all_subsets(t.attributes())) CHECK(satisfies(t, s) == oracle_satisfies(t, s));
    }
}
