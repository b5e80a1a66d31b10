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

#pragma once

// Encrypt -> transmit -> decrypt scheduling.
//
// Every run reduces to a flow shop: items (the manifest as item 0, then
// blocks 1..n) pass through the stages in order, one item per stage at a
// time. On the simulated clock stage durations come from a CostModel and the
// channel, so traces are exactly reproducible; on the real clock each stage
// is a worker thread and durations are measured.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pcpabe/abe.hpp"

namespace pcpabe {

struct ChannelModel {
    double bandwidth = 10.0 * 1024 * 1024;  // bytes per second
    double latency = 0.020;                 // propagation delay, seconds
    std::uint64_t per_block_overhead = 0;   // framing bytes per item

    /// Time the link is busy with one item. Latency is not included: it
    /// delays arrival but does not hold the link.
    double occupancy(std::uint64_t bytes) const;
    void validate() const;
};

/// Unit costs, in seconds, of the operations the scheme performs.
struct CostModel {
    double source_exp = 5.0e-4;
    double hashed_exp = 3.3e-4;   // exponentiation of a G2-only element
    double hash_to_group = 3.5e-4;
    double target_exp = 7.0e-4;
    double pairing = 1.25e-3;
    double pairing_ratio = 2.0e-3;
    double symmetric_bytes_per_second = 1.5e9;

    /// Measured on a laptop-class x86-64 core with the bundled backend.
    static CostModel reference() { return {}; }

    double symmetric(std::uint64_t bytes) const { return bytes / symmetric_bytes_per_second; }
    double encrypt_block(const SubTreePolicy& sub, std::uint64_t plain_bytes) const;
    double consume(const ConsumeReport& report, std::uint64_t block_length) const;
    double encrypt_monolithic(const AccessTree& tree, std::uint64_t message_bytes) const;
    /// Cost of decrypting the whole tree with every attribute held.
    double decrypt_monolithic(const AccessTree& tree, std::uint64_t message_bytes) const;
};

/// Per-block stage durations, for the analytic model.
struct StageTimes {
    std::vector<double> et, tt, dt;
    std::size_t n() const { return et.size(); }
};

struct AnalyticTotals {
    double sequential_enc_tx = 0;  // ET_M + TT_M
    double pipelined_enc_tx = 0;   // exact two-stage makespan
    double approx_enc_tx = 0;      // ET_1 + TT_M if every TT_i >= ET_i; ET_M + TT_n if every ET_i >= TT_i
    double delta_enc = 0;
    double sequential_tx_dec = 0;  // TT_M + DT_M
    double pipelined_tx_dec = 0;
    double approx_tx_dec = 0;      // TT_M + DT_n if every TT_i >= DT_i; TT_1 + DT_M if every DT_i >= TT_i
    double delta_dec = 0;
    double max_stage_time = 0;
};

/// Exact makespan of items passing two stages in order.
double two_stage_makespan(const std::vector<double>& first, const std::vector<double>& second);
AnalyticTotals analytic_totals(const StageTimes& times);

enum class ClockMode { kSimulated, kReal };

struct TraceRecord {
    std::size_t block;  // 0 = manifest
    std::string stage;  // encrypt | transmit | decrypt | unlock
    double start;
    double end;
    bool operator==(const TraceRecord&) const = default;
};

struct PipelineTrace {
    std::vector<TraceRecord> records;
    double pipelined = 0;   // T_1
    double sequential = 0;  // T_2, the same work with no overlap
    double fill = 0;        // until the last stage starts its first item
    double drain = 0;       // after the first stage ends its last item
    std::optional<Refusal> refusal;

    /// Line records "block,stage,start,end".
    void dump(std::ostream& out) const;
    /// Stage order, in-order processing and channel arrival constraints.
    bool precedence_holds(double latency) const;
};

/// Simulated flow shop over explicit durations. `lag[s]` delays stage s
/// behind stage s-1 (the channel latency in front of decrypt).
PipelineTrace schedule(const std::vector<std::string>& stages,
                       const std::vector<std::vector<double>>& durations,
                       const std::vector<double>& lag, std::size_t first_block = 1);

struct EncryptRun {
    PipelineTrace trace;
    Ciphertext ciphertext;
};

/// Drives the Encryptor's block stream through encrypt -> transmit.
EncryptRun run_encrypt_transmit(const PublicParams& pk, const MasterKey& mk, ByteView message,
                                const AccessTree& tree, const ChannelModel& channel, ClockMode clock,
                                Rng& rng, const CostModel& cost = CostModel::reference());

struct DecryptRun {
    PipelineTrace trace;
    std::optional<Bytes> plaintext;
};

/// Manifest first, then blocks; each block is consumed as soon as it
/// arrives and the decryptor is free.
DecryptRun run_transmit_decrypt(const PublicParams& pk, const AttributeKey& sk, const Ciphertext& ct,
                                const ChannelModel& channel, ClockMode clock,
                                const CostModel& cost = CostModel::reference());

/// Both runs joined: encrypt -> transmit -> decrypt on one timeline.
struct EndToEndRun {
    PipelineTrace trace;
    std::optional<Bytes> plaintext;
};
EndToEndRun run_end_to_end(const PublicParams& pk, const MasterKey& mk, const AttributeKey& sk,
                           ByteView message, const AccessTree& tree, const ChannelModel& channel,
                           ClockMode clock, Rng& rng, const CostModel& cost = CostModel::reference());

/// Monolithic baseline on the same timeline: one item, no overlap.
EndToEndRun run_monolithic(const PublicParams& pk, const AttributeKey& sk, ByteView message,
                           const AccessTree& tree, const ChannelModel& channel, ClockMode clock,
                           Rng& rng, const CostModel& cost = CostModel::reference());

/// AND gates arranged breadth-first with `fanout` gate children each, leaves
/// dealt round-robin across the gates. Attributes are "att0", "att1", ...
/// fanout 1 gives a chain, one level per gate.
AccessTree synthetic_tree(std::size_t leaves, std::size_t gates, std::size_t fanout = 2);

enum class SweepDimension { kSize, kLeaves, kBlocks };
std::string dimension_name(SweepDimension d);
std::optional<SweepDimension> parse_dimension(std::string_view s);

struct SweepConfig {
    SweepDimension dimension = SweepDimension::kSize;
    std::vector<std::uint64_t> values;  // empty: the dimension's defaults
    std::uint64_t message_bytes = 4ull << 20;
    std::size_t leaves = 100;
    std::size_t gates = 10;
    std::size_t fanout = 1;
    ChannelModel channel;
    ClockMode clock = ClockMode::kSimulated;
    std::uint64_t seed = 1;
    CostModel cost = CostModel::reference();

    std::vector<std::uint64_t> effective_values() const;
};

struct SweepRow {
    std::string dimension;
    std::uint64_t value;
    std::string scheme;  // partitioned | monolithic
    double total;
    double fill;
    double drain;
};

/// One partitioned and one monolithic row per point. `traces`, if given,
/// receives the partitioned trace of every point.
std::vector<SweepRow> benchmark_sweep(const SweepConfig& config,
                                      std::vector<PipelineTrace>* traces = nullptr);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace pcpabe
