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

#include <sstream>

#include "pcpabe/pipeline.hpp"

using namespace pcpabe;

namespace {

StageTimes uniform(std::size_t n, double et, double tt, double dt) {
    return {std::vector<double>(n, et), std::vector<double>(n, tt), std::vector<double>(n, dt)};
}

}  // namespace

TEST_CASE("analytic totals: hand examples") {
    const auto tx_bound = analytic_totals(uniform(4, 1, 2, 1));
    CHECK(tx_bound.sequential_enc_tx == 12);
    CHECK(tx_bound.pipelined_enc_tx == 9);
    CHECK(tx_bound.approx_enc_tx == 9);
    CHECK(tx_bound.delta_enc == 3);

    const auto compute_bound = analytic_totals(uniform(4, 2, 1, 1));
    CHECK(compute_bound.sequential_enc_tx == 12);
    CHECK(compute_bound.pipelined_enc_tx == 9);
    CHECK(compute_bound.approx_enc_tx == 9);

    const auto one = analytic_totals(uniform(1, 3, 5, 2));
    CHECK(one.pipelined_enc_tx == one.sequential_enc_tx);
    CHECK(one.delta_enc == 0);
    CHECK(one.delta_dec == 0);

    const auto dec = analytic_totals(uniform(4, 1, 2, 1));
    CHECK(dec.pipelined_tx_dec == 9);   // TT_M + DT_n
    CHECK(dec.approx_tx_dec == 9);
    const auto dec2 = analytic_totals(uniform(4, 1, 1, 3));
    CHECK(dec2.pipelined_tx_dec == 13);  // TT_1 + DT_M
    CHECK(dec2.approx_tx_dec == 13);

    CHECK_THROWS_AS(analytic_totals({}), std::invalid_argument);
    CHECK_THROWS_AS(two_stage_makespan({1, 2}, {1}), std::invalid_argument);
}

TEST_CASE("analytic totals: random positive times") {
    auto rng = Rng::seeded(51);
    auto draw = [&] { return 0.001 + rng.uniform(1000) / 100.0; };
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng.uniform(20);
        StageTimes t;
        for (std::size_t i = 0; i < n; ++i) {
            t.et.push_back(draw());
            t.tt.push_back(draw());
            t.dt.push_back(draw());
        }
        const auto a = analytic_totals(t);
        CHECK(a.delta_enc >= 0);
        CHECK(a.delta_dec >= 0);
        if (n >= 2) {
            CHECK(a.delta_enc > 0);
            CHECK(a.delta_dec > 0);
        }
        CHECK(a.approx_enc_tx <= a.pipelined_enc_tx + 1e-9);
        const auto trace = schedule({"encrypt", "transmit"}, {t.et, t.tt}, {0, 0});
        CHECK(trace.pipelined == doctest::Approx(a.pipelined_enc_tx).epsilon(1e-12));
        CHECK(trace.sequential == doctest::Approx(a.sequential_enc_tx).epsilon(1e-12));
        CHECK(trace.precedence_holds(0));
    }
}

TEST_CASE("schedule with lag") {
    const auto trace = schedule({"transmit", "decrypt"}, {{1, 1, 1}, {2, 2, 2}}, {0, 0.5});
    CHECK(trace.pipelined == doctest::Approx(7.5));
    CHECK(trace.sequential == doctest::Approx(9.5));
    CHECK(trace.fill == doctest::Approx(1.5));
    CHECK(trace.drain == doctest::Approx(4.5));
    CHECK(trace.precedence_holds(0.5));
    CHECK_FALSE(trace.precedence_holds(1.0));
    CHECK_THROWS_AS(schedule({"a"}, {{1}, {1}}, {0}), std::invalid_argument);

    std::ostringstream out;
    trace.dump(out);
    const std::string text = out.str();
    CHECK(text.rfind("block,stage,start,end\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}

TEST_CASE("channel model") {
    ChannelModel c;
    c.bandwidth = 1000;
    c.per_block_overhead = 24;
    CHECK(c.occupancy(976) == doctest::Approx(1.0));
    c.bandwidth = 0;
    CHECK_THROWS(c.validate());
    c.bandwidth = 1;
    c.latency = -1;
    CHECK_THROWS(c.validate());
}

struct PipelineFixture {
    Rng rng = Rng::seeded(52);
    PublicParams pk;
    MasterKey mk;
    PipelineFixture() { std::tie(pk, mk) = setup(rng); }
};

TEST_CASE_FIXTURE(PipelineFixture, "simulated encrypt and transmit") {
    const AccessTree tree = parse_policy("(A and B) or (C and D) or (E and F)");
    const Bytes msg = rng.bytes(200000);
    ChannelModel ch;
    const auto run = run_encrypt_transmit(pk, mk, msg, tree, ch, ClockMode::kSimulated, rng);
    CHECK(run.ciphertext.blocks.size() == 4);
    CHECK(run.trace.records.size() == 10);
    CHECK(run.trace.precedence_holds(0));
    CHECK(run.trace.pipelined <= run.trace.sequential);
    const AttributeKey sk = keygen(pk, mk, {"C", "D"}, rng);
    CHECK(decrypt(pk, sk, run.ciphertext).value() == msg);

    // a free channel leaves only encryption plus latency
    ChannelModel fast;
    fast.bandwidth = 1e18;
    fast.latency = 0;
    const auto quick = run_encrypt_transmit(pk, mk, msg, tree, fast, ClockMode::kSimulated, rng);
    double et = 0;
    for (const auto& r : quick.trace.records)
        if (r.stage == "encrypt") et += r.end - r.start;
    CHECK(quick.trace.pipelined == doctest::Approx(et).epsilon(1e-9));
}

TEST_CASE_FIXTURE(PipelineFixture, "simulated transmit and decrypt") {
    const Bytes msg = rng.bytes(50000);
    ChannelModel ch;

    SUBCASE("single block") {
        const AccessTree tree = parse_policy("A and B");
        const Ciphertext ct = encrypt(pk, mk, msg, tree, rng);
        const auto run = run_transmit_decrypt(pk, keygen(pk, mk, {"A", "B"}, rng), ct, ch, ClockMode::kSimulated);
        REQUIRE(run.plaintext);
        CHECK(*run.plaintext == msg);
        CHECK(run.trace.precedence_holds(ch.latency));
        CHECK_FALSE(run.trace.refusal);
    }
    SUBCASE("children wait for their parent") {
        const AccessTree tree = parse_policy("E or (A and B) or (C and D)");
        const Ciphertext ct = encrypt(pk, mk, msg, tree, rng);
        const auto run = run_transmit_decrypt(pk, keygen(pk, mk, {"E"}, rng), ct, ch, ClockMode::kSimulated);
        REQUIRE(run.plaintext);
        CHECK(*run.plaintext == msg);
        CHECK(run.trace.precedence_holds(ch.latency));
        std::map<std::size_t, double> unlock, decrypted;
        for (const auto& r : run.trace.records) {
            if (r.stage == "unlock") unlock[r.block] = r.start;
            if (r.stage == "decrypt") decrypted[r.block] = r.end;
        }
        REQUIRE(unlock.size() == 3);
        for (std::size_t b : {2, 3}) CHECK(unlock.at(b) >= unlock.at(1));
        CHECK(unlock.at(1) == doctest::Approx(decrypted.at(1)));
    }
    SUBCASE("refusal truncates the trace") {
        const AccessTree tree = parse_policy("(A and B) or (C and D)");
        const Ciphertext ct = encrypt(pk, mk, msg, tree, rng);
        const auto run = run_transmit_decrypt(pk, keygen(pk, mk, {"X"}, rng), ct, ch, ClockMode::kSimulated);
        CHECK_FALSE(run.plaintext);
        REQUIRE(run.trace.refusal);
        CHECK(run.trace.refusal->label() == "att_check");
        for (const auto& r : run.trace.records) CHECK(r.block == 0);
    }
}

TEST_CASE_FIXTURE(PipelineFixture, "end to end and monolithic") {
    const AccessTree tree = synthetic_tree(12, 4, 2);
    CHECK(enumerate_blocks(tree).size() == 4);
    CHECK(tree.leaf_count() == 12);
    const Bytes msg = rng.bytes(1 << 20);
    AttributeSet all;
    for (const auto& a : tree.attributes()) all.insert(a);
    const AttributeKey sk = keygen(pk, mk, all, rng);
    ChannelModel ch;
    const auto part = run_end_to_end(pk, mk, sk, msg, tree, ch, ClockMode::kSimulated, rng);
    REQUIRE(part.plaintext);
    CHECK(*part.plaintext == msg);
    CHECK(part.trace.precedence_holds(ch.latency));
    const auto mono = run_monolithic(pk, sk, msg, tree, ch, ClockMode::kSimulated, rng);
    REQUIRE(mono.plaintext);
    CHECK(*mono.plaintext == msg);
    CHECK(part.trace.pipelined < mono.trace.pipelined);
}

TEST_CASE_FIXTURE(PipelineFixture, "real clock smoke") {
    const AccessTree tree = parse_policy("(A and B) or C");
    const Bytes msg = rng.bytes(20000);
    ChannelModel ch;
    ch.bandwidth = 50.0 * 1024 * 1024;
    ch.latency = 0.002;
    const AttributeKey sk = keygen(pk, mk, {"A", "B"}, rng);
    const auto run = run_end_to_end(pk, mk, sk, msg, tree, ch, ClockMode::kReal, rng);
    REQUIRE(run.plaintext);
    CHECK(*run.plaintext == msg);
    CHECK(run.trace.precedence_holds(ch.latency));
    CHECK(run.trace.pipelined > 0);

    const auto enc = run_encrypt_transmit(pk, mk, msg, tree, ch, ClockMode::kReal, rng);
    CHECK(enc.trace.precedence_holds(0));
    const auto dec = run_transmit_decrypt(pk, sk, enc.ciphertext, ch, ClockMode::kReal);
    REQUIRE(dec.plaintext);
    CHECK(*dec.plaintext == msg);
}

TEST_CASE("sweep configuration") {
    CHECK(parse_dimension("size") == SweepDimension::kSize);
    CHECK(parse_dimension("leaves") == SweepDimension::kLeaves);
    CHECK(parse_dimension("blocks") == SweepDimension::kBlocks);
    CHECK_FALSE(parse_dimension("bogus"));
    CHECK(dimension_name(SweepDimension::kBlocks) == "blocks");
    SweepConfig c;
    CHECK(c.effective_values() == std::vector<std::uint64_t>{1, 2, 4, 8, 16});
    c.values = {3};
    CHECK(c.effective_values() == std::vector<std::uint64_t>{3});
}

TEST_CASE("sweep output is deterministic") {
    SweepConfig c;
    c.dimension = SweepDimension::kBlocks;
    c.values = {1, 2, 4};
    c.leaves = 16;
    c.fanout = 2;
    c.message_bytes = 256 << 10;
    c.seed = 7;
    std::vector<PipelineTrace> traces;
    const auto rows = benchmark_sweep(c, &traces);
    CHECK(rows.size() == 6);
    for (const auto& t : traces) CHECK(t.precedence_holds(c.channel.latency));
    std::ostringstream a, b;
    write_csv(a, rows);
    write_csv(b, benchmark_sweep(c));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("dimension,value,scheme,total_seconds,fill_seconds,drain_seconds\n", 0) == 0);
}
