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

#include <algorithm>

#include "pcpabe/chunker.hpp"
#include "pcpabe/crypto.hpp"

using namespace pcpabe;

TEST_CASE("partition layout") {
    const auto one = partition(to_bytes("abcd"), 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].index == 1);
    CHECK(one[0].bytes.size() == 13);
    CHECK(one[0].bytes[0] == kChunkFormatVersion);
    CHECK(one[0].bytes[8] == 4);
    CHECK(Bytes(one[0].bytes.begin() + 9, one[0].bytes.end()) == to_bytes("abcd"));

    CHECK(block_length(100, 4) == 28);
    const auto four = partition(Bytes(100, 0xaa), 4);
    CHECK(four.size() == 4);
    for (const auto& b : four) CHECK(b.bytes.size() == 28);
    CHECK(block_length(0, 3) == 3);
}

TEST_CASE("chaining") {
    const std::vector<PlainBlock> m{{1, {0x61, 0x62}}, {2, {0x63, 0x64}}};
    const auto db = chain(m);
    CHECK(db[0].bytes == Bytes{0x61, 0x62});
    CHECK(db[1].bytes == Bytes{0x02, 0x06});
    CHECK(unchain(db) == m);

    const std::vector<PlainBlock> same{{1, {7, 7}}, {2, {7, 7}}, {3, {7, 7}}};
    const auto z = chain(same);
    CHECK(z[1].bytes == Bytes{0, 0});
    CHECK(z[2].bytes == Bytes{0, 0});
    CHECK(chain(std::vector<PlainBlock>{{1, {9}}})[0].bytes == Bytes{9});

    const std::vector<PlainBlock> ragged{{1, {1, 2}}, {2, {3}}};
    CHECK_THROWS_AS(chain(ragged), std::invalid_argument);
}

TEST_CASE("unchain needs every block and accepts any order") {
    auto rng = Rng::seeded(31);
    const Bytes msg = rng.bytes(5000);
    auto db = chain(partition(msg, 16));
    std::vector<ChainedBlock> shuffled = db;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[3], shuffled[9]);
    CHECK(reassemble(unchain(shuffled)) == msg);

    std::vector<ChainedBlock> no_first(db.begin() + 1, db.end());
    CHECK_THROWS(unchain(no_first));
    std::vector<ChainedBlock> twice = db;
    twice[2] = twice[1];
    CHECK_THROWS(unchain(twice));
}

TEST_CASE("reassemble rejects bad headers") {
    auto blocks = partition(to_bytes("a message long enough for the header"), 2);
    auto bad_len = blocks;
    bad_len[0].bytes[8] = 200;
    CHECK_THROWS(reassemble(bad_len));
    auto bad_ver = blocks;
    bad_ver[0].bytes[0] = 2;
    CHECK_THROWS(reassemble(bad_ver));
    CHECK(reassemble(partition({}, 3)).empty());
}

TEST_CASE("round trip over a thousand random messages") {
    auto rng = Rng::seeded(32);
    for (int i = 0; i < 1000; ++i) {
        // mostly small, some up to 1 MiB
        const std::size_t len = i % 50 == 0 ? rng.uniform(1u << 20) : rng.uniform(4096);
        const std::size_t n = 1 + rng.uniform(32);
        const Bytes msg = rng.bytes(len);
        const auto plain = partition(msg, n);
        REQUIRE(plain.size() == n);
        CHECK(reassemble(unchain(chain(plain))) == msg);
    }
}

TEST_CASE("streaming unchainer emits prefixes") {
    auto rng = Rng::seeded(33);
    const Bytes msg = rng.bytes(999);
    const auto plain = partition(msg, 5);
    const auto db = chain(plain);
    StreamingUnchainer s(5);
    CHECK(s.push(db[2]).empty());
    CHECK(s.push(db[1]).empty());
    const auto first = s.push(db[0]);
    REQUIRE(first.size() == 3);
    CHECK(first[2] == plain[2]);
    CHECK(s.push(db[4]).empty());
    const auto rest = s.push(db[3]);
    CHECK(rest.size() == 2);
    CHECK(s.complete());
}
