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

#include "pcpabe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pcpabe {

double ChannelModel::occupancy(std::uint64_t bytes) const {
    return static_cast<double>(bytes + per_block_overhead) / bandwidth;
}

void ChannelModel::validate() const {
    if (!(bandwidth > 0)) throw std::invalid_argument("channel bandwidth must be positive");
    if (!(latency >= 0)) throw std::invalid_argument("channel latency must be non-negative");
}

// --- cost model ---------------------------------------------------------------

double CostModel::encrypt_block(const SubTreePolicy& sub, std::uint64_t plain_bytes) const {
    // C', E and, below the root, delta; then g^{q_y} and H(att)^{q_y} per leaf.
    const double exps = 2.0 + (sub.parent_block ? 1.0 : 0.0) + static_cast<double>(sub.leaves.size());
    return exps * source_exp + static_cast<double>(sub.leaves.size()) * (hash_to_group + hashed_exp) +
           target_exp + symmetric(plain_bytes);
}

double CostModel::consume(const ConsumeReport& report, std::uint64_t block_length) const {
    double t = static_cast<double>(report.leaf_pairings) * pairing_ratio +
               static_cast<double>(report.lagrange_terms) * target_exp;
    for (const auto& u : report.unlocked)
        t += (u.path == DecryptPath::kAbe ? pairing : pairing_ratio) +
             symmetric(block_length + kEmbeddedElementBytes);
    return t;
}

double CostModel::encrypt_monolithic(const AccessTree& tree, std::uint64_t message_bytes) const {
    const double leaves = static_cast<double>(tree.leaf_count());
    return source_exp + leaves * (source_exp + hash_to_group + hashed_exp) + target_exp +
           symmetric(message_bytes);
}

double CostModel::decrypt_monolithic(const AccessTree& tree, std::uint64_t message_bytes) const {
    double t = pairing + symmetric(message_bytes);
    for (const Node& n : tree.nodes())
        t += n.is_leaf() ? pairing_ratio : n.threshold * target_exp;
    return t;
}

// --- analytic model -----------------------------------------------------------

double two_stage_makespan(const std::vector<double>& first, const std::vector<double>& second) {
    if (first.size() != second.size()) throw std::invalid_argument("two_stage_makespan: length mismatch");
    double a = 0, b = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        a += first[i];
        b = std::max(a, b) + second[i];
    }
    return b;
}

namespace {

/// Transmission-bound form (every TT_i >= the compute stage) or the
/// compute-bound form; with mixed blocks only the larger of the two, which
/// is a lower bound on the exact makespan.
double approximate(const std::vector<double>& compute, const std::vector<double>& tt, double tt_sum,
                   double compute_sum, double compute_edge, double tt_edge) {
    bool tx_bound = true, compute_bound = true;
    for (std::size_t i = 0; i < tt.size(); ++i) {
        tx_bound = tx_bound && tt[i] >= compute[i];
        compute_bound = compute_bound && compute[i] >= tt[i];
    }
    const double by_tx = compute_edge + tt_sum;
    const double by_compute = compute_sum + tt_edge;
    if (tx_bound) return by_tx;
    if (compute_bound) return by_compute;
    return std::max(by_tx, by_compute);
}

}  // namespace

AnalyticTotals analytic_totals(const StageTimes& t) {
    const std::size_t n = t.n();
    if (n == 0 || t.tt.size() != n || t.dt.size() != n)
        throw std::invalid_argument("analytic_totals: need n >= 1 and equal-length stage vectors");
    auto sum = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };
    const double et = sum(t.et), tt = sum(t.tt), dt = sum(t.dt);

    AnalyticTotals out;
    out.sequential_enc_tx = et + tt;
    out.pipelined_enc_tx = two_stage_makespan(t.et, t.tt);
    out.delta_enc = out.sequential_enc_tx - out.pipelined_enc_tx;
    out.approx_enc_tx = approximate(t.et, t.tt, tt, et, t.et.front(), t.tt.back());

    out.sequential_tx_dec = tt + dt;
    out.pipelined_tx_dec = two_stage_makespan(t.tt, t.dt);
    out.delta_dec = out.sequential_tx_dec - out.pipelined_tx_dec;
    out.approx_tx_dec = approximate(t.dt, t.tt, tt, dt, t.dt.back(), t.tt.front());

    for (const auto* v : {&t.et, &t.tt, &t.dt})
        for (double x : *v) out.max_stage_time = std::max(out.max_stage_time, x);
    return out;
}

// --- traces -------------------------------------------------------------------

void PipelineTrace::dump(std::ostream& out) const {
    out << "block,stage,start,end\n";
    std::ostringstream line;
    for (const auto& r : records) {
        line.str("");
        line << r.block << ',' << r.stage << ',' << std::setprecision(9) << std::fixed << r.start << ','
             << r.end << '\n';
        out << line.str();
    }
}

namespace {

int stage_rank(const std::string& s) {
    if (s == "encrypt") return 0;
    if (s == "transmit") return 1;
    if (s == "decrypt") return 2;
    return 3;
}

constexpr double kSlack = 1e-9;

}  // namespace

bool PipelineTrace::precedence_holds(double latency) const {
    std::map<std::pair<std::size_t, int>, const TraceRecord*> at;
    std::map<int, const TraceRecord*> last_in_stage;
    for (const auto& r : records) {
        if (r.end + kSlack < r.start) return false;
        const int s = stage_rank(r.stage);
        if (s == 3) continue;
        at[{r.block, s}] = &r;
        // in index order within a stage, one item at a time
        if (auto it = last_in_stage.find(s); it != last_in_stage.end()) {
            if (it->second->block >= r.block || r.start + kSlack < it->second->end) return false;
        }
        last_in_stage[s] = &r;
    }
    for (const auto& [key, r] : at) {
        for (int prev = key.second - 1; prev >= 0; --prev) {
            auto it = at.find({key.first, prev});
            if (it == at.end()) continue;
            const double lag = (prev == 1 && key.second == 2) ? latency : 0.0;
            if (r->start + kSlack < it->second->end + lag) return false;
            break;
        }
    }
    for (const auto& r : records) {
        if (stage_rank(r.stage) != 3) continue;
        auto it = at.find({r.block, 2});
        if (it == at.end() || r.start + kSlack < it->second->end) return false;
    }
    return true;
}

PipelineTrace schedule(const std::vector<std::string>& stages,
                       const std::vector<std::vector<double>>& durations, const std::vector<double>& lag,
                       std::size_t first_block) {
    if (stages.empty() || durations.size() != stages.size() || lag.size() != stages.size())
        throw std::invalid_argument("schedule: one duration vector and one lag per stage");
    const std::size_t items = durations.front().size();
    for (const auto& d : durations)
        if (d.size() != items) throw std::invalid_argument("schedule: ragged durations");

    PipelineTrace trace;
    std::vector<double> prev_end(items, 0.0);
    double sequential = 0;
    for (std::size_t s = 0; s < stages.size(); ++s) {
        double free_at = 0;
        if (items > 0) sequential += lag[s];
        for (std::size_t i = 0; i < items; ++i) {
            const double start = std::max(prev_end[i] + lag[s], free_at);
            const double end = start + durations[s][i];
            trace.records.push_back({first_block + i, stages[s], start, end});
            prev_end[i] = free_at = end;
            sequential += durations[s][i];
            if (i == 0 && s + 1 == stages.size()) trace.fill = start;
        }
        if (s == 0 && items > 0) trace.drain = free_at;  // end of the first stage, fixed up below
    }
    trace.pipelined = items ? prev_end.back() : 0.0;
    trace.drain = trace.pipelined - trace.drain;
    trace.sequential = sequential;
    return trace;
}

namespace {

using SteadyClock = std::chrono::steady_clock;

/// Blocking queue of item indices with a fixed capacity.
class BoundedQueue {
  public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

    void push(std::size_t item, SteadyClock::time_point ready) {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return q_.size() < capacity_; });
        q_.emplace_back(item, ready);
        cv_.notify_all();
    }
    void close() {
        std::lock_guard lock(m_);
        closed_ = true;
        cv_.notify_all();
    }
    std::optional<std::pair<std::size_t, SteadyClock::time_point>> pop() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return !q_.empty() || closed_; });
        if (q_.empty()) return std::nullopt;
        auto v = q_.front();
        q_.pop_front();
        cv_.notify_all();
        return v;
    }

  private:
    std::size_t capacity_;
    std::mutex m_;
    std::condition_variable cv_;
    std::deque<std::pair<std::size_t, SteadyClock::time_point>> q_;
    bool closed_ = false;
};

struct RealStage {
    std::string name;
    double lag = 0;  // wait between the previous stage's end and this start
    /// Does the stage's work for one item; false stops the pipeline.
    std::function<bool(std::size_t)> work;
};

/// One worker thread per stage. `items` may grow while running (the first
/// stage learns n only after item 0), so it is read through a callback.
PipelineTrace run_real(std::vector<RealStage> stages, std::function<std::size_t()> items,
                       std::size_t capacity, std::vector<TraceRecord>& extra,
                       std::mutex& extra_mutex, SteadyClock::time_point t0) {
    const std::size_t k = stages.size();
    std::vector<std::unique_ptr<BoundedQueue>> queues;
    for (std::size_t s = 0; s + 1 < k; ++s) queues.push_back(std::make_unique<BoundedQueue>(capacity));
    std::vector<std::vector<TraceRecord>> recs(k);
    auto secs = [&](SteadyClock::time_point t) { return std::chrono::duration<double>(t - t0).count(); };
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&](std::size_t s) {
        try {
            for (std::size_t i = 0;; ++i) {
                if (s == 0) {
                    if (i >= items()) break;
                } else {
                    auto next = queues[s - 1]->pop();
                    if (!next) break;
                    std::this_thread::sleep_until(next->second);
                    i = next->first;
                }
                const auto start = SteadyClock::now();
                const bool go = stages[s].work(i);
                const auto end = SteadyClock::now();
                recs[s].push_back({i, stages[s].name, secs(start), secs(end)});
                if (!go) break;
                if (s + 1 < k) {
                    const auto lag = std::chrono::duration_cast<SteadyClock::duration>(
                        std::chrono::duration<double>(stages[s + 1].lag));
                    queues[s]->push(i, end + lag);
                }
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
        if (s + 1 < k) queues[s]->close();
    };

    std::vector<std::thread> threads;
    for (std::size_t s = 1; s < k; ++s) threads.emplace_back(worker, s);
    worker(0);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);

    PipelineTrace trace;
    for (auto& r : recs) trace.records.insert(trace.records.end(), r.begin(), r.end());
    {
        // An unlock seen mid-step takes effect when that step ends.
        std::lock_guard lock(extra_mutex);
        for (auto mark : extra) {
            for (const auto& r : recs.back())
                if (r.start <= mark.start && mark.start <= r.end) mark.start = mark.end = r.end;
            trace.records.push_back(mark);
        }
    }
    double makespan = 0, sequential = 0;
    for (const auto& r : trace.records) {
        if (r.stage == "unlock") continue;
        makespan = std::max(makespan, r.end);
        sequential += r.end - r.start;
    }
    for (std::size_t s = 1; s < k; ++s) sequential += stages[s].lag;
    trace.pipelined = makespan;
    trace.sequential = sequential;
    if (!recs.back().empty()) trace.fill = recs.back().front().start;
    if (!recs.front().empty()) trace.drain = makespan - recs.front().back().end;
    return trace;
}

/// Decryption state shared by the simulated and real drivers.
class Receiver {
  public:
    Receiver(const PublicParams& pk, const AttributeKey& sk, const Ciphertext& ct, const CostModel& cost)
        : ct_(ct), cost_(cost), session_(pk, sk, ct.manifest) {}

    /// Item 0 is the manifest, item i block i. Returns the modeled cost;
    /// a refusal is stored and ends the run.
    double step(std::size_t item) {
        if (item == 0) {
            if (auto r = session_.begin()) refusal_ = *r;
            return cost_.symmetric(ct_.manifest.serialize().size());
        }
        auto report = session_.consume(ct_.blocks.at(item - 1));
        if (!report) {
            refusal_ = report.refusal();
            return 0;
        }
        double t = cost_.consume(report.value(), ct_.manifest.block_length);
        unlocked_.push_back({});
        for (const auto& u : report.value().unlocked) unlocked_.back().push_back(u.block);
        if (item == ct_.blocks.size()) {
            auto m = session_.finish();
            if (m) {
                plaintext_ = std::move(m.value());
                t += cost_.symmetric(plaintext_->size());
            } else {
                refusal_ = m.refusal();
            }
        }
        return t;
    }
    bool failed() const { return refusal_.has_value(); }
    const std::optional<Refusal>& refusal() const { return refusal_; }
    std::optional<Bytes>& plaintext() { return plaintext_; }
    const std::vector<std::size_t>& last_unlocked() const { return unlocked_.back(); }

  private:
    const Ciphertext& ct_;
    const CostModel& cost_;
    DecryptSession session_;
    std::optional<Refusal> refusal_;
    std::optional<Bytes> plaintext_;
    std::vector<std::vector<std::size_t>> unlocked_;
};

std::vector<std::uint64_t> item_sizes(const Manifest& m) {
    std::vector<std::uint64_t> out{m.serialize().size()};
    out.insert(out.end(), m.block_sizes.begin(), m.block_sizes.end());
    return out;
}

/// Unlock markers at the end of the decrypt step that produced them.
void add_unlocks(PipelineTrace& trace, const std::vector<std::vector<std::size_t>>& per_item) {
    std::vector<TraceRecord> marks;
    for (const auto& r : trace.records) {
        if (r.stage != "decrypt" || r.block == 0 || r.block > per_item.size()) continue;
        for (auto b : per_item[r.block - 1]) marks.push_back({b, "unlock", r.end, r.end});
    }
    trace.records.insert(trace.records.end(), marks.begin(), marks.end());
}

/// Truncates a simulated run at the item whose decrypt step refused.
void truncate_after(std::vector<std::vector<double>>& durations, std::size_t items) {
    for (auto& d : durations) d.resize(items);
}

}  // namespace

// --- drivers ------------------------------------------------------------------

EncryptRun run_encrypt_transmit(const PublicParams& pk, const MasterKey& mk, ByteView message,
                                const AccessTree& tree, const ChannelModel& channel, ClockMode clock,
                                Rng& rng, const CostModel& cost) {
    channel.validate();
    EncryptRun run;
    if (clock == ClockMode::kSimulated) {
        Encryptor enc(pk, mk, message, tree, rng);
        run.ciphertext.manifest = enc.manifest();
        std::vector<double> et{cost.symmetric(message.size())};
        while (!enc.done()) {
            run.ciphertext.blocks.push_back(enc.seal_next());
            et.push_back(cost.encrypt_block(enc.sub_trees()[run.ciphertext.blocks.size() - 1],
                                            enc.manifest().block_length + kEmbeddedElementBytes));
        }
        std::vector<double> tt;
        for (auto s : item_sizes(run.ciphertext.manifest)) tt.push_back(channel.occupancy(s));
        run.trace = schedule({"encrypt", "transmit"}, {et, tt}, {0, 0}, 0);
    } else {
        std::optional<Encryptor> enc;
        std::vector<std::uint64_t> sizes;
        std::mutex m;
        std::atomic<std::size_t> known{1};
        std::vector<TraceRecord> none;
        std::mutex none_mutex;
        run.ciphertext.blocks.clear();
        std::vector<std::optional<CiphertextBlock>> blocks;
        RealStage encrypt{"encrypt", 0, [&](std::size_t i) {
                              if (i == 0) {
                                  enc.emplace(pk, mk, message, tree, rng);
                                  std::lock_guard lock(m);
                                  sizes = item_sizes(enc->manifest());
                                  blocks.resize(enc->block_count());
                                  known = enc->block_count() + 1;
                              } else {
                                  auto b = enc->seal_next();
                                  std::lock_guard lock(m);
                                  blocks[i - 1] = std::move(b);
                              }
                              return true;
                          }};
        RealStage transmit{"transmit", 0, [&](std::size_t i) {
                               double busy;
                               {
                                   std::lock_guard lock(m);
                                   busy = channel.occupancy(sizes.at(i));
                               }
                               std::this_thread::sleep_for(std::chrono::duration<double>(busy));
                               return true;
                           }};
        run.trace = run_real({encrypt, transmit}, [&] { return known.load(); }, 1, none, none_mutex,
                             SteadyClock::now());
        run.ciphertext.manifest = enc->manifest();
        for (auto& b : blocks) run.ciphertext.blocks.push_back(std::move(*b));
    }
    // Arrival at the far end.
    run.trace.pipelined += channel.latency;
    run.trace.sequential += channel.latency;
    run.trace.drain += channel.latency;
    return run;
}

DecryptRun run_transmit_decrypt(const PublicParams& pk, const AttributeKey& sk, const Ciphertext& ct,
                                const ChannelModel& channel, ClockMode clock, const CostModel& cost) {
    channel.validate();
    DecryptRun run;
    Receiver rx(pk, sk, ct, cost);
    const auto sizes = item_sizes(ct.manifest);
    if (clock == ClockMode::kSimulated) {
        std::vector<double> tt, dt;
        std::vector<std::vector<std::size_t>> unlocks;
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            tt.push_back(channel.occupancy(sizes[i]));
            dt.push_back(rx.step(i));
            if (i > 0 && !rx.failed()) unlocks.push_back(rx.last_unlocked());
            if (rx.failed()) break;
        }
        std::vector<std::vector<double>> d{tt, dt};
        truncate_after(d, dt.size());
        run.trace = schedule({"transmit", "decrypt"}, d, {0, channel.latency}, 0);
        add_unlocks(run.trace, unlocks);
    } else {
        std::vector<TraceRecord> unlocks;
        std::mutex um;
        const auto t0 = SteadyClock::now();
        RealStage transmit{"transmit", 0, [&](std::size_t i) {
                               std::this_thread::sleep_for(std::chrono::duration<double>(channel.occupancy(sizes[i])));
                               return true;
                           }};
        RealStage decrypt{"decrypt", channel.latency, [&](std::size_t i) {
                              rx.step(i);
                              if (rx.failed()) return false;
                              if (i > 0) {
                                  const double now = std::chrono::duration<double>(SteadyClock::now() - t0).count();
                                  std::lock_guard lock(um);
                                  for (auto b : rx.last_unlocked()) unlocks.push_back({b, "unlock", now, now});
                              }
                              return true;
                          }};
        run.trace = run_real({transmit, decrypt}, [&] { return sizes.size(); }, 1, unlocks, um, t0);
    }
    run.trace.refusal = rx.refusal();
    run.plaintext = std::move(rx.plaintext());
    return run;
}

EndToEndRun run_end_to_end(const PublicParams& pk, const MasterKey& mk, const AttributeKey& sk,
                           ByteView message, const AccessTree& tree, const ChannelModel& channel,
                           ClockMode clock, Rng& rng, const CostModel& cost) {
    channel.validate();
    EndToEndRun run;
    if (clock == ClockMode::kSimulated) {
        auto enc = run_encrypt_transmit(pk, mk, message, tree, channel, clock, rng, cost);
        std::vector<double> et, tt;
        for (const auto& r : enc.trace.records) (r.stage == "encrypt" ? et : tt).push_back(r.end - r.start);
        Receiver rx(pk, sk, enc.ciphertext, cost);
        std::vector<double> dt;
        std::vector<std::vector<std::size_t>> unlocks;
        for (std::size_t i = 0; i < et.size(); ++i) {
            dt.push_back(rx.step(i));
            if (i > 0 && !rx.failed()) unlocks.push_back(rx.last_unlocked());
            if (rx.failed()) break;
        }
        std::vector<std::vector<double>> d{et, tt, dt};
        truncate_after(d, dt.size());
        run.trace = schedule({"encrypt", "transmit", "decrypt"}, d, {0, 0, channel.latency}, 0);
        add_unlocks(run.trace, unlocks);
        run.trace.refusal = rx.refusal();
        run.plaintext = std::move(rx.plaintext());
        return run;
    }

    // Real clock: three workers; the receiver needs the manifest, which
    // exists once item 0 has been encrypted.
    Ciphertext ct;
    std::optional<Encryptor> enc;
    std::optional<Receiver> rx;
    std::vector<std::uint64_t> sizes;
    std::mutex m;
    std::atomic<std::size_t> known{1};
    std::vector<TraceRecord> unlocks;
    std::mutex um;
    const auto t0 = SteadyClock::now();
    RealStage encrypt{"encrypt", 0, [&](std::size_t i) {
                          if (i == 0) {
                              enc.emplace(pk, mk, message, tree, rng);
                              std::lock_guard lock(m);
                              ct.manifest = enc->manifest();
                              ct.blocks.resize(enc->block_count());
                              sizes = item_sizes(ct.manifest);
                              known = enc->block_count() + 1;
                          } else {
                              auto b = enc->seal_next();
                              std::lock_guard lock(m);
                              ct.blocks[i - 1] = std::move(b);
                          }
                          return true;
                      }};
    RealStage transmit{"transmit", 0, [&](std::size_t i) {
                           double busy;
                           {
                               std::lock_guard lock(m);
                               busy = channel.occupancy(sizes.at(i));
                           }
                           std::this_thread::sleep_for(std::chrono::duration<double>(busy));
                           return true;
                       }};
    RealStage decrypt{"decrypt", channel.latency, [&](std::size_t i) {
                          if (i == 0) {
                              std::lock_guard lock(m);
                              rx.emplace(pk, sk, ct, cost);
                          }
                          rx->step(i);
                          if (rx->failed()) return false;
                          if (i > 0) {
                              const double now = std::chrono::duration<double>(SteadyClock::now() - t0).count();
                              std::lock_guard lock(um);
                              for (auto b : rx->last_unlocked()) unlocks.push_back({b, "unlock", now, now});
                          }
                          return true;
                      }};
    run.trace = run_real({encrypt, transmit, decrypt}, [&] { return known.load(); }, 1, unlocks, um, t0);
    if (rx) {
        run.trace.refusal = rx->refusal();
        run.plaintext = std::move(rx->plaintext());
    }
    return run;
}

EndToEndRun run_monolithic(const PublicParams& pk, const AttributeKey& sk, ByteView message,
                           const AccessTree& tree, const ChannelModel& channel, ClockMode clock,
                           Rng& rng, const CostModel& cost) {
    channel.validate();
    EndToEndRun run;
    double et, tt, dt;
    std::optional<Outcome<Bytes>> out;
    if (clock == ClockMode::kSimulated) {
        const auto ct = encrypt_monolithic(pk, message, tree, rng);
        out = decrypt_monolithic(pk, sk, ct);
        et = cost.encrypt_monolithic(tree, message.size());
        tt = channel.occupancy(ct.wire_size());
        dt = cost.decrypt_monolithic(tree, message.size());
    } else {
        auto t = SteadyClock::now();
        auto lap = [&] {
            const auto now = SteadyClock::now();
            const double s = std::chrono::duration<double>(now - t).count();
            t = now;
            return s;
        };
        const auto ct = encrypt_monolithic(pk, message, tree, rng);
        et = lap();
        tt = channel.occupancy(ct.wire_size());
        std::this_thread::sleep_for(std::chrono::duration<double>(tt + channel.latency));
        lap();
        out = decrypt_monolithic(pk, sk, ct);
        dt = lap();
    }
    run.trace = schedule({"encrypt", "transmit", "decrypt"}, {{et}, {tt}, {dt}}, {0, 0, channel.latency}, 1);
    if (*out) run.plaintext = std::move(out->value());
    else run.trace.refusal = out->refusal();
    return run;
}

// --- sweeps -------------------------------------------------------------------

AccessTree synthetic_tree(std::size_t leaves, std::size_t gates, std::size_t fanout) {
    if (gates == 0 || fanout == 0) throw std::invalid_argument("synthetic_tree: need gates and fanout >= 1");
    if (leaves < gates) throw std::invalid_argument("synthetic_tree: need at least one leaf per gate");
    std::vector<std::vector<std::size_t>> gate_children(gates);
    for (std::size_t j = 1; j < gates; ++j) gate_children[(j - 1) / fanout].push_back(j);
    std::vector<std::vector<std::string>> leaf_attrs(gates);
    for (std::size_t l = 0; l < leaves; ++l) leaf_attrs[l % gates].push_back("att" + std::to_string(l));

    std::function<AccessTree(std::size_t)> build = [&](std::size_t j) {
        std::vector<AccessTree> kids;
        for (const auto& a : leaf_attrs[j]) kids.push_back(AccessTree::leaf(a));
        for (auto c : gate_children[j]) kids.push_back(build(c));
        return AccessTree::all_of(std::move(kids));
    };
    return build(0);
}

std::string dimension_name(SweepDimension d) {
    switch (d) {
        case SweepDimension::kSize: return "size";
        case SweepDimension::kLeaves: return "leaves";
        case SweepDimension::kBlocks: return "blocks";
    }
    return "size";
}

std::optional<SweepDimension> parse_dimension(std::string_view s) {
    if (s == "size") return SweepDimension::kSize;
    if (s == "leaves") return SweepDimension::kLeaves;
    if (s == "blocks") return SweepDimension::kBlocks;
    return std::nullopt;
}

std::vector<std::uint64_t> SweepConfig::effective_values() const {
    if (!values.empty()) return values;
    switch (dimension) {
        case SweepDimension::kSize: return {1, 2, 4, 8, 16};
        case SweepDimension::kLeaves: return {16, 32, 48, 64, 80, 96, 112, 128};
        case SweepDimension::kBlocks: return {1, 2, 4, 8, 16, 32};
    }
    return {};
}

std::vector<SweepRow> benchmark_sweep(const SweepConfig& config, std::vector<PipelineTrace>* traces) {
    config.channel.validate();
    auto rng = Rng::seeded(config.seed);
    auto [pk, mk] = setup(rng);
    std::vector<SweepRow> rows;
    const std::string dim = dimension_name(config.dimension);

    for (auto v : config.effective_values()) {
        std::uint64_t bytes = config.message_bytes;
        std::size_t leaves = config.leaves, gates = config.gates, fanout = config.fanout;
        switch (config.dimension) {
            case SweepDimension::kSize: bytes = v << 20; break;
            case SweepDimension::kLeaves: leaves = v; break;
            case SweepDimension::kBlocks: gates = v; break;
        }
        const AccessTree tree = synthetic_tree(leaves, gates, fanout);
        const auto attrs = tree.attributes();
        const AttributeKey sk = keygen(pk, mk, AttributeSet(attrs.begin(), attrs.end()), rng);
        const Bytes message = rng.bytes(bytes);

        auto part = run_end_to_end(pk, mk, sk, message, tree, config.channel, config.clock, rng, config.cost);
        auto mono = run_monolithic(pk, sk, message, tree, config.channel, config.clock, rng, config.cost);
        if (part.plaintext != message || mono.plaintext != message)
            throw std::runtime_error("benchmark_sweep: round trip failed at " + dim + "=" + std::to_string(v));
        if (traces) traces->push_back(part.trace);
        rows.push_back({dim, v, "partitioned", part.trace.pipelined, part.trace.fill, part.trace.drain});
        rows.push_back({dim, v, "monolithic", mono.trace.pipelined, mono.trace.fill, mono.trace.drain});
    }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "dimension,value,scheme,total_seconds,fill_seconds,drain_seconds\n";
    std::ostringstream line;
    line << std::fixed << std::setprecision(9);
    for (const auto& r : rows) {
        line.str("");
        line << r.dimension << ',' << r.value << ',' << r.scheme << ',' << r.total << ',' << r.fill << ','
             << r.drain << '\n';
        out << line.str();
    }
}

}  // namespace pcpabe
