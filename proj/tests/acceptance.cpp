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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>

#include "pcpabe/pipeline.hpp"
#include "support.hpp"

using namespace pcpabe;
using namespace pcpabe::testing;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

void fail(Result& r, const std::string& why) {
    if (r.pass) r.detail = why;
    r.pass = false;
}

/// A random satisfying subset of the tree's attributes.
AttributeSet satisfying_subset(const AccessTree& tree, Rng& rng) {
    const auto attrs = tree.attributes();
    for (int tries = 0; tries < 64; ++tries) {
        AttributeSet s;
        for (const auto& a : attrs)
            if (rng.uniform(2)) s.insert(a);
        if (!s.empty() && oracle_satisfies(tree, s)) return s;
    }
    return AttributeSet(attrs.begin(), attrs.end());
}

AttributeSet all_of(const AccessTree& tree) {
    const auto attrs = tree.attributes();
    return AttributeSet(attrs.begin(), attrs.end());
}

std::size_t gate_count(const AccessTree& tree) { return enumerate_blocks(tree).size(); }

/// Round trips with satisfying keys.
Result round_trips(const PublicParams& pk, const MasterKey& mk, Rng& rng, int count, std::size_t max_gates) {
    Result r;
    int ok = 0;
    for (int i = 0; i < count; ++i) {
        const AccessTree tree = random_tree(rng, 12, max_gates);
        const Bytes msg = rng.bytes(rng.uniform((1u << 20) + 1));
        const Ciphertext ct = encrypt(pk, mk, msg, tree, rng);
        const AttributeKey sk = keygen(pk, mk, satisfying_subset(tree, rng), rng);
        const auto out = decrypt(pk, sk, ct);
        if (out && out.value() == msg) ++ok;
        else fail(r, "instance " + std::to_string(i) + " on " + tree.to_string());
    }
    r.detail = std::to_string(ok) + "/" + std::to_string(count) + " byte-identical" +
               (r.pass ? "" : "; first failure " + r.detail);
    return r;
}

/// Decrypt succeeds iff the brute-force oracle says so, over every subset.
Result enforcement(const PublicParams& pk, const MasterKey& mk, Rng& rng, int trees, std::size_t max_gates,
                   std::size_t min_attributes, std::size_t* checked) {
    Result r;
    for (int i = 0; i < trees; ++i) {
        AccessTree tree = random_tree(rng, 10, max_gates, 6);
        while (tree.attributes().size() < min_attributes) tree = random_tree(rng, 10, max_gates, 6);
        const Ciphertext ct = encrypt(pk, mk, rng.bytes(64 + rng.uniform(512)), tree, rng);
        const AttributeKey full = keygen(pk, mk, all_of(tree), rng);
        for (const auto& s : all_subsets(tree.attributes())) {
            if (s.empty()) continue;  // no key holds nothing
            const bool expect = oracle_satisfies(tree, s);
            const bool got = decrypt(pk, full.restricted_to(s), ct).ok();
            ++*checked;
            if (expect != got) {
                std::string set;
                for (const auto& a : s) set += a;
                fail(r, tree.to_string() + " with {" + set + "}");
            }
        }
    }
    return r;
}

Result criterion1(const PublicParams& pk, const MasterKey& mk) {
    auto rng = Rng::seeded(101);
    return round_trips(pk, mk, rng, 100, 5);
}

Result criterion2(const PublicParams& pk, const MasterKey& mk) {
    auto rng = Rng::seeded(102);
    std::size_t checked = 0;
    Result r = enforcement(pk, mk, rng, 50, 5, 4, &checked);

    // Filter passes, decryption refuses at block 1.
    const std::vector<std::pair<const char*, AttributeSet>> constructed{
        {"(A and B) or (C and D)", {"A", "C"}},
        {"(A and B) or (C and D)", {"B", "D"}},
        {"(A and B and C) or (D and E)", {"A", "B", "D"}},
        {"2 of (A and B, C and D, E and F)", {"A", "C", "E"}},
        {"(A and B) or 2 of (C, D, E)", {"B", "C"}},
        {"2 of (A and B, C and D, E)", {"A", "E"}},
    };
    int refused = 0;
    for (const auto& [text, s] : constructed) {
        const AccessTree tree = parse_policy(text);
        const Ciphertext ct = encrypt(pk, mk, to_bytes("constructed"), tree, rng);
        const AttributeKey sk = keygen(pk, mk, s, rng);
        const bool filter = att_check(ct.manifest.table, s, ct.manifest.tree_length).ok();
        const auto out = decrypt(pk, sk, ct);
        if (filter && !out && out.refusal().label() == "block 1" && !oracle_satisfies(tree, s)) ++refused;
        else fail(r, std::string("constructed case ") + text);
    }
    std::ostringstream d;
    d << checked << " (tree, subset) pairs agree with the oracle; " << refused << "/" << constructed.size()
      << " filter-pass cases refused at block 1";
    if (!r.pass) d << "; mismatch " << r.detail;
    r.detail = d.str();
    return r;
}

Result criterion3(const PublicParams& pk, const MasterKey& mk) {
    auto rng = Rng::seeded(103);
    Result r;
    int instances = 0;
    while (instances < 50) {
        const AccessTree tree = random_tree(rng, 12, 5);
        if (gate_count(tree) < 2) continue;
        const Ciphertext ct = encrypt(pk, mk, rng.bytes(1 + rng.uniform(20000)), tree, rng);
        const AttributeKey sk = keygen(pk, mk, all_of(tree), rng);
        const auto f = block_values(ct, tree, sk);
        const auto subs = enumerate_blocks(tree);
        std::vector<std::optional<BlockPlain>> opened(subs.size());
        for (const auto& sub : subs) {
            const auto i = sub.block - 1;
            if (!f[i]) continue;
            if (auto p = ctb_abe_dec(ct.blocks[i], sk, *f[i])) opened[i] = p.value();
        }
        for (const auto& sub : subs) {
            if (!sub.parent_block || instances >= 50) continue;
            const auto i = sub.block - 1;
            const auto& parent = opened[*sub.parent_block - 1];
            if (!opened[i] || !parent) continue;
            const auto sym = ctb_sym_dec(ct.blocks[i], parent->e, sk);
            ++instances;
            if (!sym || serialize_plain(sym.value()) != serialize_plain(*opened[i]))
                fail(r, "block " + std::to_string(sub.block) + " of " + tree.to_string());
        }
    }
    r.detail = std::to_string(instances) + " blocks opened both ways" + (r.pass ? ", byte-identical" : "; differs at " + r.detail);
    return r;
}

Result criterion4(const PublicParams& pk, const MasterKey& mk) {
    auto rng = Rng::seeded(104);
    Result r;
    int refused = 0;
    const char* kinds[] = {"drop", "flip-block-id", "flip-manifest-id", "swap"};
    for (int trial = 0; trial < 100; ++trial) {
        AccessTree tree = random_tree(rng, 12, 5);
        while (gate_count(tree) < 2) tree = random_tree(rng, 12, 5);
        Ciphertext ct = encrypt(pk, mk, rng.bytes(1 + rng.uniform(50000)), tree, rng);
        const AttributeKey sk = keygen(pk, mk, all_of(tree), rng);
        const int kind = trial % 4;
        const std::size_t n = ct.blocks.size();
        switch (kind) {
            case 0:
                ct.blocks.erase(ct.blocks.begin() + static_cast<std::ptrdiff_t>(rng.uniform(n)));
                break;
            case 1: {
                auto& id = ct.blocks[rng.uniform(n)].id;
                id[rng.uniform(id.size())] ^= static_cast<std::uint8_t>(1u << rng.uniform(8));
                break;
            }
            case 2: {
                auto& id = ct.manifest.ids[rng.uniform(n)];
                id[rng.uniform(id.size())] ^= static_cast<std::uint8_t>(1u << rng.uniform(8));
                break;
            }
            default: {
                const std::size_t a = rng.uniform(n);
                const std::size_t b = (a + 1 + rng.uniform(n - 1)) % n;
                std::swap(ct.blocks[a].payload, ct.blocks[b].payload);
                break;
            }
        }
        const auto out = decrypt(pk, sk, ct);
        if (!out) ++refused;
        else fail(r, std::string(kinds[kind]) + " accepted on trial " + std::to_string(trial));
    }
    r.detail = std::to_string(refused) + "/100 tamper trials refused" + (r.pass ? "" : "; " + r.detail);
    return r;
}

Result criterion5(const PublicParams& pk, const MasterKey& mk) {
    auto rng = Rng::seeded(105);
    Result r;
    auto draw = [&] { return 0.001 + static_cast<double>(rng.uniform(1000000)) / 1e5; };
    int trials = 0, approx_checked = 0;
    double worst = 0;
    for (std::size_t n : {2, 4, 8, 16}) {
        for (int trial = 0; trial < 50; ++trial) {
            // 0: transmission-bound, 1: compute-bound, 2: mixed
            const int regime = trial % 3;
            StageTimes t;
            for (std::size_t i = 0; i < n; ++i) {
                const double a = draw(), b = draw();
                const double lo = std::min(a, b), hi = std::max(a, b);
                if (regime == 0) {
                    t.et.push_back(lo), t.tt.push_back(hi), t.dt.push_back(draw() * lo / (hi + lo));
                } else if (regime == 1) {
                    t.et.push_back(hi), t.tt.push_back(lo), t.dt.push_back(lo + draw());
                } else {
                    t.et.push_back(a), t.tt.push_back(b), t.dt.push_back(draw());
                }
            }
            const auto a = analytic_totals(t);
            const auto trace = schedule({"encrypt", "transmit"}, {t.et, t.tt}, {0, 0});
            const auto dec = schedule({"transmit", "decrypt"}, {t.tt, t.dt}, {0, 0});
            ++trials;
            if (!(a.pipelined_enc_tx < a.sequential_enc_tx) || !(a.pipelined_tx_dec < a.sequential_tx_dec))
                fail(r, "no strict gain at n=" + std::to_string(n));
            if (!(a.delta_enc > 0) || !(a.delta_dec > 0)) fail(r, "delta T not positive at n=" + std::to_string(n));
            if (trace.pipelined != a.pipelined_enc_tx || dec.pipelined != a.pipelined_tx_dec)
                fail(r, "schedule and recurrence disagree at n=" + std::to_string(n));
            if (!trace.precedence_holds(0) || !dec.precedence_holds(0)) fail(r, "precedence violated");
            if (regime != 2) {
                const double e1 = std::abs(a.pipelined_enc_tx - a.approx_enc_tx);
                const double e2 = std::abs(a.pipelined_tx_dec - a.approx_tx_dec);
                worst = std::max(worst, std::max(e1, e2) / a.max_stage_time);
                ++approx_checked;
                if (e1 > a.max_stage_time + 1e-9) fail(r, "enc approximation off by more than one stage time");
                if (e2 > a.max_stage_time + 1e-9)
                    fail(r, "dec approximation off by more than one stage time");
            }
        }
    }

    // real crypto, 10 MiB, a ten level chain over a hundred leaves
    ChannelModel ch;
    const AccessTree tree = synthetic_tree(100, 10, 1);
    const Bytes msg = rng.bytes(10u << 20);
    const auto run = run_encrypt_transmit(pk, mk, msg, tree, ch, ClockMode::kSimulated, rng);
    if (!(run.trace.pipelined <= run.trace.sequential)) fail(r, "10 MiB run: pipelined above sequential");
    if (!run.trace.precedence_holds(0)) fail(r, "10 MiB run: precedence violated");

    std::ostringstream d;
    d << trials << " injected traces with strict gain and delta T > 0; " << approx_checked
      << " single-regime traces within one max stage time (worst " << std::setprecision(3) << worst
      << "); 10 MiB ten-level run " << std::setprecision(4) << run.trace.pipelined << " s vs sequential "
      << run.trace.sequential << " s";
    if (!r.pass) d << "; " << r.detail;
    r.detail = d.str();
    return r;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Result criterion6() {
    Result r;
    auto column = [](const std::vector<SweepRow>& rows, const std::string& scheme) {
        std::vector<double> v;
        for (const auto& row : rows)
            if (row.scheme == scheme) v.push_back(row.total);
        return v;
    };
    SweepConfig base;
    base.channel.bandwidth = 10.0 * 1024 * 1024;
    base.channel.latency = 0.020;
    base.seed = 106;

    // (a) message size
    SweepConfig size = base;
    size.dimension = SweepDimension::kSize;
    const auto size_rows = benchmark_sweep(size);
    const auto sp = column(size_rows, "partitioned"), sm = column(size_rows, "monolithic");
    for (std::size_t i = 0; i < sp.size(); ++i)
        if (!(sp[i] <= sm[i])) fail(r, "size sweep: partitioned above monolithic at point " + std::to_string(i));

    // (c) leaves at a fixed block count
    SweepConfig leaves = base;
    leaves.dimension = SweepDimension::kLeaves;
    leaves.gates = 8;
    leaves.fanout = 2;
    const auto leaf_rows = benchmark_sweep(leaves);
    std::vector<double> x;
    for (auto v : leaves.effective_values()) x.push_back(static_cast<double>(v));
    const double slope_p = slope(x, column(leaf_rows, "partitioned"));
    const double slope_m = slope(x, column(leaf_rows, "monolithic"));
    if (!(slope_p <= slope_m)) fail(r, "leaves sweep: partitioned slope above monolithic");

    // (d) blocks at fixed leaves
    SweepConfig blocks = base;
    blocks.dimension = SweepDimension::kBlocks;
    blocks.leaves = 96;
    blocks.fanout = 2;
    const auto block_rows = benchmark_sweep(blocks);
    const auto bp = column(block_rows, "partitioned");
    for (std::size_t i = 1; i < bp.size(); ++i)
        if (bp[i] > bp[i - 1] * 1.10) fail(r, "blocks sweep: partitioned total rose beyond 10%");

    // determinism
    std::ostringstream a, b;
    write_csv(a, block_rows);
    write_csv(b, benchmark_sweep(blocks));
    if (a.str() != b.str()) fail(r, "blocks sweep CSV differs between identical runs");

    std::ostringstream d;
    d << std::setprecision(4) << "size: partitioned " << sp.front() << ".." << sp.back() << " s vs monolithic "
      << sm.front() << ".." << sm.back() << " s; leaves slope " << slope_p << " vs " << slope_m
      << " s/leaf; blocks: partitioned " << bp.front() << " -> " << bp.back() << " s; CSV deterministic";
    if (!r.pass) d << "; " << r.detail;
    r.detail = d.str();
    return r;
}

Result criterion7() {
    Result r;
    auto rng = Rng::seeded(107);
    using T = TinyScalar;
    std::size_t subsets_checked = 0;
    for (unsigned t = 1; t <= 6; ++t) {
        for (unsigned k = 1; k <= t; ++k) {
            const std::vector<T> secret{T::random(rng), T::random(rng)};
            const auto points = shamir_split<T>(std::span<const T>(secret), k, t, rng);
            for (unsigned mask = 0; mask < (1u << t); ++mask) {
                if (static_cast<unsigned>(std::popcount(mask)) != k) continue;
                std::vector<ShamirPoint<T>> chosen;
                for (unsigned j = 0; j < t; ++j)
                    if (mask >> j & 1) chosen.push_back(points[j]);
                ++subsets_checked;
                if (shamir_recover<T>(chosen, k) != secret)
                    fail(r, "shamir k=" + std::to_string(k) + " t=" + std::to_string(t));
            }
        }
    }

    std::size_t gates_checked = 0;
    for (int i = 0; i < 200; ++i) {
        const AccessTree tree = random_tree(rng, 12, 5);
        const auto tiny = assign_shares<T>(tree, T::random(rng), rng);
        const auto big = assign_shares<Scalar>(tree, Scalar::random(rng), rng);
        for (const Node& n : tree.nodes()) {
            if (n.is_leaf()) continue;
            // every k-subset of the children
            const std::size_t c = n.children.size();
            for (unsigned mask = 0; mask < (1u << c); ++mask) {
                if (static_cast<unsigned>(std::popcount(mask)) != n.threshold) continue;
                std::vector<std::pair<T, T>> pt;
                std::vector<std::pair<Scalar, Scalar>> pb;
                for (std::size_t j = 0; j < c; ++j) {
                    if (!(mask >> j & 1)) continue;
                    const Node& child = tree.node(n.children[j]);
                    pt.emplace_back(T::from_u64(child.index), tiny.share.at(child.id));
                    pb.emplace_back(Scalar::from_u64(child.index), big.share.at(child.id));
                }
                if (interpolate_at_zero<T>(pt) != tiny.share.at(n.id) ||
                    !(interpolate_at_zero<Scalar>(pb) == big.share.at(n.id)))
                    fail(r, "gate " + std::to_string(n.id) + " of " + tree.to_string());
            }
            ++gates_checked;
        }
    }
    r.detail = std::to_string(subsets_checked) + " Shamir subsets exact; " + std::to_string(gates_checked) +
               " gates of 200 trees recombine to q_x(0)" + (r.pass ? "" : "; " + r.detail);
    return r;
}

Result criterion8(const PublicParams& pk, const MasterKey& mk) {
    Result r;
    auto rng = Rng::seeded(108);
    int structural = 0;
    for (int i = 0; i < 30; ++i) {
        const AccessTree tree = random_tree(rng, 12, 1);
        const Ciphertext ct = encrypt(pk, mk, rng.bytes(1 + rng.uniform(4096)), tree, rng);
        if (ct.blocks.size() != 1 || ct.blocks[0].delta || !ct.blocks[0].table) {
            fail(r, "n=1 structure for " + tree.to_string());
            continue;
        }
        const AttributeKey sk = keygen(pk, mk, all_of(tree), rng);
        const auto f = block_values(ct, tree, sk);
        const auto opened = ctb_abe_dec(ct.blocks[0], sk, *f[0]);
        if (!opened || ctb_sym_dec(ct.blocks[0], opened.value().e, sk).ok()) {
            fail(r, "n=1 paths for " + tree.to_string());
            continue;
        }
        // same verdicts as the monolithic baseline
        const Bytes msg = rng.bytes(100);
        const auto mono = encrypt_monolithic(pk, msg, tree, rng);
        const Ciphertext part = encrypt(pk, mk, msg, tree, rng);
        for (const auto& s : all_subsets(tree.attributes())) {
            if (s.empty()) continue;
            const AttributeKey k = sk.restricted_to(s);
            if (decrypt(pk, k, part).ok() != decrypt_monolithic(pk, k, mono).ok())
                fail(r, "n=1 verdict differs from monolithic for " + tree.to_string());
        }
        ++structural;
    }

    // criteria 1 and 2 restricted to single-gate trees
    Result rt = round_trips(pk, mk, rng, 30, 1);
    std::size_t checked = 0;
    Result en = enforcement(pk, mk, rng, 30, 1, 3, &checked);
    if (!rt.pass) fail(r, "round trip: " + rt.detail);
    if (!en.pass) fail(r, "enforcement: " + en.detail);
    std::ostringstream d;
    d << structural << "/30 single-gate ciphertexts have one block, no delta, no SYM path and monolithic verdicts; "
      << "round trip " << rt.detail.substr(0, rt.detail.find(' ')) << "; " << checked << " subsets agree with the oracle";
    if (!r.pass) d << "; " << r.detail;
    r.detail = d.str();
    return r;
}

}  // namespace

int main() {
    auto rng = Rng::seeded(100);
    const auto [pk, mk] = setup(rng);
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"round-trip correctness", [&] { return criterion1(pk, mk); }},
        {"enforcement oracle equivalence", [&] { return criterion2(pk, mk); }},
        {"dual-path equality", [&] { return criterion3(pk, mk); }},
        {"integrity detection", [&] { return criterion4(pk, mk); }},
        {"pipeline gain", [&] { return criterion5(pk, mk); }},
        {"benchmark trends", [] { return criterion6(); }},
        {"secret sharing", [] { return criterion7(); }},
        {"single-gate degenerate case", [&] { return criterion8(pk, mk); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %zu %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    r.detail.c_str(), secs);
        std::fflush(stdout);
        failures += r.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
