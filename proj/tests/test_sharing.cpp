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

#include <numeric>

#include "pcpabe/sharing.hpp"
#include "support.hpp"

using namespace pcpabe;
using pcpabe::testing::random_tree;
using T = TinyScalar;

namespace {

T t(std::uint64_t v) { return T::from_u64(v); }

/// All k-subsets of {0..n-1}.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace

TEST_CASE("lagrange coefficients") {
    const std::vector<T> one{t(1)};
    CHECK(lagrange_coeff<T>(t(1), one, t(0)) == t(1));
    const std::vector<T> two{t(1), t(2)};
    CHECK(lagrange_coeff<T>(t(1), two, t(0)) == t(2));
    CHECK(lagrange_coeff<T>(t(2), two, t(0)) == -t(1));
    const std::vector<T> rep{t(1), t(1)};
    CHECK_THROWS_AS(lagrange_coeff<T>(t(1), rep, t(0)), std::invalid_argument);
    CHECK_THROWS_AS(lagrange_coeff<T>(t(3), two, t(0)), std::invalid_argument);

    auto rng = Rng::seeded(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = Polynomial<T>::random(T::random(rng), 2, rng);
        std::vector<std::pair<T, T>> pts;
        for (std::uint64_t x : {1, 2, 3}) pts.emplace_back(t(x), q(t(x)));
        CHECK(interpolate_at_zero<T>(pts) == q(t(0)));
    }
    // the same code over the pairing group order
    const auto q = Polynomial<Scalar>::random(Scalar::random(rng), 3, rng);
    std::vector<std::pair<Scalar, Scalar>> pts;
    for (std::uint64_t x : {2, 5, 7, 11}) pts.emplace_back(Scalar::from_u64(x), q(Scalar::from_u64(x)));
    CHECK(interpolate_at_zero<Scalar>(pts) == q.coefficients().front());
}

TEST_CASE("tiny field") {
    CHECK(t(T::kModulus) == t(0));
    CHECK(t(5) * t(5).inverse() == t(1));
    CHECK(t(3) - t(5) == -t(2));
    CHECK_THROWS_AS(t(0).inverse(), std::domain_error);
}

TEST_CASE("share assignment") {
    auto rng = Rng::seeded(22);
    const AccessTree and_tree = parse_policy("A and B");
    const auto s = assign_shares<T>(and_tree, t(7), rng);
    const T qa = s.share.at(1), qb = s.share.at(2);
    CHECK(qa == s.polynomial.at(0)(t(1)));
    CHECK(qb == s.polynomial.at(0)(t(2)));
    const std::vector<std::pair<T, T>> pts{{t(1), qa}, {t(2), qb}};
    CHECK(interpolate_at_zero<T>(pts) == t(7));

    const auto o = assign_shares<T>(parse_policy("A or B or C"), t(9), rng);
    CHECK(o.polynomial.at(0).degree() == 0);
    for (NodeId c : {1u, 2u, 3u}) CHECK(o.share.at(c) == t(9));

    for (int i = 0; i < 50; ++i) {
        const AccessTree tree = random_tree(rng, 12, 5);
        const T secret = T::random(rng);
        const auto a = assign_shares<T>(tree, secret, rng);
        CHECK(a.share.at(tree.root_id()) == secret);
        for (const Node& n : tree.nodes()) {
            if (n.parent) CHECK(a.share.at(n.id) == a.polynomial.at(*n.parent)(t(n.index)));
            if (!n.is_leaf()) CHECK(a.polynomial.at(n.id).degree() == n.threshold - 1u);
        }
    }
}

TEST_CASE("shamir split examples") {
    auto rng = Rng::seeded(23);
    const auto pts = shamir_split<T>(t(42), 1, 4, rng);
    for (const auto& p : pts) CHECK(p.y == std::vector<T>{t(42)});

    // Q(x) = 5 + 3x by hand
    const std::vector<ShamirPoint<T>> hand{{t(1), {t(8)}}, {t(2), {t(11)}}};
    CHECK(shamir_recover<T>(hand, 2) == std::vector<T>{t(5)});
    CHECK_THROWS_AS(shamir_recover<T>({hand[0]}, 2), InsufficientShares);
    CHECK_THROWS_AS(shamir_recover<T>({hand[0], hand[0]}, 2), InsufficientShares);
    auto with_bad = hand;
    with_bad.push_back({t(3), {t(999)}});
    CHECK(shamir_recover<T>(with_bad, 2) == std::vector<T>{t(5)});
    CHECK_THROWS_AS(shamir_recover<T>({{t(0), {t(1)}}, hand[0]}, 1), std::invalid_argument);
    CHECK_THROWS_AS(shamir_split<T>(t(1), 3, 2, rng), std::invalid_argument);
    CHECK_THROWS_AS(shamir_split<T>(t(1), 0, 2, rng), std::invalid_argument);
}

TEST_CASE("shamir recovery from every k-subset, k <= t <= 6") {
    auto rng = Rng::seeded(24);
    for (unsigned tt = 1; tt <= 6; ++tt) {
        for (unsigned k = 1; k <= tt; ++k) {
            const std::vector<T> secret{T::random(rng), T::random(rng), T::random(rng)};
            const auto pts = shamir_split<T>(std::span<const T>(secret), k, tt, rng);
            for (const auto& idx : subsets(tt, k)) {
                std::vector<ShamirPoint<T>> chosen;
                for (auto i : idx) chosen.push_back(pts[i]);
                CHECK(shamir_recover<T>(chosen, k) == secret);
            }
            if (k > 1)
                for (const auto& idx : subsets(tt, k - 1)) {
                    std::vector<ShamirPoint<T>> chosen;
                    for (auto i : idx) chosen.push_back(pts[i]);
                    CHECK_THROWS_AS(shamir_recover<T>(chosen, k), InsufficientShares);
                }
        }
    }
}

TEST_CASE("limbs") {
    auto rng = Rng::seeded(25);
    for (std::size_t len : {0, 1, 30, 31, 32, 62, 63, 100}) {
        const Bytes b = rng.bytes(len);
        const auto limbs = bytes_to_limbs(b);
        CHECK(limbs.size() == (len + kLimbBytes - 1) / kLimbBytes);
        CHECK(limbs_to_bytes(limbs, len) == b);
    }
    // a limb wider than its slot does not fit
    const std::vector<Scalar> wide{Scalar{} - Scalar::from_u64(1)};
    CHECK_FALSE(limbs_to_bytes(wide, 31));
}

TEST_CASE("point table") {
    auto rng = Rng::seeded(26);
    const std::vector<std::vector<std::string>> sets{{"A", "B"}, {"C"}, {"D", "E"}};
    const Bytes secret = rng.bytes(70);
    const auto limbs = bytes_to_limbs(secret);
    const auto points = shamir_split<Scalar>(limbs, 2, 3, rng);
    const MaskedPointTable table = build_point_table(sets, points, 2);
    CHECK(table.entries.size() == 5);
    CHECK(table.k == 2);
    CHECK(table.t == 3);

    auto a = lookup_points(table, {"A"});
    REQUIRE(a.size() == 1);
    CHECK(a[0] == points[0]);
    CHECK(lookup_points(table, {"A", "B"}).size() == 1);
    CHECK(lookup_points(table, {"A", "C"}).size() == 2);
    CHECK(lookup_points(table, {"X", "Y"}).empty());
    CHECK(shamir_recover(lookup_points(table, {"B", "E"}), 2) == limbs);

    CHECK(table.entries.at(table_key("A")) != table.entries.at(table_key("B")));
    CHECK(Bytes(table_key("A").begin(), table_key("A").end()) != table_mask("A", 32));

    CHECK(MaskedPointTable::deserialize(table.serialize()) == table);
    Bytes bad = table.serialize();
    bad.back() = 9;
    CHECK_NOTHROW(MaskedPointTable::deserialize(bad));
    bad[bad.size() - 3] = 10;  // k = 10 > t = 9
    CHECK_THROWS_AS(MaskedPointTable::deserialize(bad), DecodeError);
    CHECK_THROWS_AS(build_point_table({{"A"}}, {points[0], points[1]}, 1), std::invalid_argument);

    // an attribute under two branches unmasks both points
    const auto shared = build_point_table({{"A", "B"}, {"A", "C"}, {"D"}}, points, 2);
    CHECK(shared.entries.size() == 4);
    CHECK(lookup_points(shared, {"A"}).size() == 2);
    CHECK(shamir_recover(lookup_points(shared, {"A"}), 2) == limbs);
    CHECK(lookup_points(shared, {"B", "C"}).size() == 2);
    CHECK(lookup_points(shared, {"A", "B", "C"}).size() == 2);
}

TEST_CASE("point table completeness over random trees") {
    auto rng = Rng::seeded(27);
    for (int i = 0; i < 30; ++i) {
        const AccessTree tree = random_tree(rng, 10, 5, 6);
        const auto sets = root_branch_partition(tree);
        const auto limbs = bytes_to_limbs(rng.bytes(40));
        const unsigned k = tree.root().threshold;
        const auto points = shamir_split<Scalar>(limbs, k, static_cast<unsigned>(sets.size()), rng);
        const auto table = build_point_table(sets, points, k);
        for (const auto& s : pcpabe::testing::all_subsets(tree.attributes())) {
            std::size_t branches = 0;
            for (const auto& set : sets)
                branches += std::any_of(set.begin(), set.end(), [&](const std::string& a) { return s.count(a); });
            CHECK(lookup_points(table, s).size() == branches);
        }
    }
}

TEST_CASE("xor id shares") {
    auto rng = Rng::seeded(28);
    const SerializedTree tree = canonical_serialize(parse_policy("(A and B) or C"));
    for (std::size_t n : {1, 3, 8}) {
        const IdShareSet ids = xor_share_ids(tree, n, rng);
        CHECK(ids.ids.size() == n);
        for (const auto& id : ids.ids) CHECK(id.size() == tree.size());
        CHECK(xor_recover(ids.ids, ids.last) == tree.bytes());
        if (n == 1) {
            Bytes r2 = tree.bytes();
            for (std::size_t i = 0; i < r2.size(); ++i) r2[i] ^= ids.ids[0][i];
            CHECK(ids.last == r2);
        }
        if (n > 1) {
            std::vector<Bytes> dropped(ids.ids.begin() + 1, ids.ids.end());
            CHECK_THROWS_AS(parse_serialized(xor_recover(dropped, ids.last)), DecodeError);
        }
    }
    const IdShareSet ids = xor_share_ids(tree, 2, rng);
    std::vector<Bytes> bad = ids.ids;
    bad[0].pop_back();
    CHECK_THROWS_AS(xor_recover(bad, ids.last), std::invalid_argument);
}
