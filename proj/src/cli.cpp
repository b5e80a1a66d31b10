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

#include "pcpabe/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pcpabe/pipeline.hpp"
#include "pcpabe/wire.hpp"

namespace pcpabe::cli {

namespace fs = std::filesystem;

namespace {

struct Failure {
    ExitCode code;
    std::string message;
};

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kIo, "cannot read " + path};
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Failure{kIo, "read error on " + path};
    return data;
}

/// Writes every file or none: each goes to a temporary beside its target
/// and all are renamed only once all writes have succeeded.
void write_files(const std::vector<std::pair<std::string, ByteView>>& files) {
    std::vector<fs::path> temps, done;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
        for (const auto& d : done) fs::remove(d, ec);
    };
    for (const auto& [path, data] : files) {
        fs::path tmp = path;
        tmp += ".partial";
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (out) out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (!out || !out.flush()) {
            cleanup();
            throw Failure{kIo, "cannot write " + path};
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        fs::rename(temps[i], files[i].first, ec);
        if (ec) {
            cleanup();
            throw Failure{kIo, "cannot write " + files[i].first + ": " + ec.message()};
        }
        done.push_back(files[i].first);
    }
}

template <class F>
auto decoded(const std::string& path, F decode) {
    const Bytes data = read_file(path);
    try {
        return decode(ByteView(data));
    } catch (const DecodeError& e) {
        throw Failure{kParse, path + ": " + e.what()};
    }
}

Rng make_rng(const std::optional<std::uint64_t>& seed) {
    return seed ? Rng::seeded(*seed) : Rng::system();
}

ExitCode refusal_code(const Refusal& r) {
    switch (r.stage) {
        case Stage::kAttCheck: return kAttCheck;
        case Stage::kIntegrity: return kIntegrity;
        case Stage::kBlock: return kDecrypt;
    }
    return kDecrypt;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

void check_pair(const PublicParams& pk, const Digest& other, const char* what) {
    if (pk.digest() != other) throw Failure{kUsage, std::string(what) + " was made for different public parameters"};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Block-partitioned, pipelined CP-ABE"};
    app.require_subcommand(1);

    std::string pk_path, mk_path, sk_path, in_path, out_path, policy, attrs, trace_path, values;
    std::optional<std::uint64_t> seed;

    auto* setup_cmd = app.add_subcommand("setup", "Generate public parameters and a master key");
    setup_cmd->add_option("--pk", pk_path, "Public parameters output")->required();
    setup_cmd->add_option("--mk", mk_path, "Master key output")->required();
    setup_cmd->add_option("--seed", seed, "Deterministic randomness (testing only)");

    auto* keygen_cmd = app.add_subcommand("keygen", "Issue an attribute key");
    keygen_cmd->add_option("--pk", pk_path)->required();
    keygen_cmd->add_option("--mk", mk_path)->required();
    keygen_cmd->add_option("--attrs", attrs, "Comma-separated attributes")->required();
    keygen_cmd->add_option("--out", out_path, "Attribute key output")->required();
    keygen_cmd->add_option("--seed", seed);

    auto* encrypt_cmd = app.add_subcommand(
        "encrypt",
        "Encrypt a file under a policy. Needs the MASTER key: in this scheme the "
        "data owner is trusted with MK, because block encryption uses its exponent q.");
    encrypt_cmd->add_option("--pk", pk_path)->required();
    encrypt_cmd->add_option("--mk", mk_path)->required();
    encrypt_cmd->add_option("--policy", policy, "e.g. \"(A and B) or 2 of (C, D, E)\"")->required();
    encrypt_cmd->add_option("--in", in_path)->required();
    encrypt_cmd->add_option("--out", out_path)->required();
    encrypt_cmd->add_option("--seed", seed);

    auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a container");
    decrypt_cmd->add_option("--pk", pk_path)->required();
    decrypt_cmd->add_option("--sk", sk_path)->required();
    decrypt_cmd->add_option("--in", in_path)->required();
    decrypt_cmd->add_option("--out", out_path)->required();

    auto* inspect_cmd = app.add_subcommand("inspect", "Show a container's layout; with --pk and --sk also "
                                                      "run the attribute pre-check and the integrity check");
    inspect_cmd->add_option("--in", in_path)->required();
    inspect_cmd->add_option("--pk", pk_path);
    inspect_cmd->add_option("--sk", sk_path);

    SweepConfig sweep;
    std::string dimension = "size", clock = "sim";
    double bandwidth_mib = 10, latency_ms = 20, size_mib = 4;
    std::uint64_t bench_seed = 1;
    auto* bench_cmd = app.add_subcommand("bench", "Partitioned vs monolithic sweep, CSV output");
    bench_cmd->add_option("--sweep", dimension, "size | leaves | blocks")
        ->check(CLI::IsMember({"size", "leaves", "blocks"}));
    bench_cmd->add_option("--values,--sizes", values, "Comma-separated sweep points (MiB for size)");
    bench_cmd->add_option("--seed", bench_seed);
    bench_cmd->add_option("--channel-bandwidth", bandwidth_mib, "MiB per second")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--channel-latency", latency_ms, "Milliseconds")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--clock", clock, "sim | real")->check(CLI::IsMember({"sim", "real"}));
    bench_cmd->add_option("--size", size_mib, "Message MiB when not swept")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--leaves", sweep.leaves, "Leaf count when not swept");
    bench_cmd->add_option("--gates", sweep.gates, "Gate (block) count when not swept");
    bench_cmd->add_option("--fanout", sweep.fanout, "Gate children per gate; 1 is a chain");
    bench_cmd->add_option("--out", out_path, "CSV file (default stdout)");
    bench_cmd->add_option("--trace", trace_path, "Trace of the first sweep point, partitioned run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (dynamic_cast<const CLI::CallForHelp*>(&e) || dynamic_cast<const CLI::CallForAllHelp*>(&e)
                        ? app.help()
                        : std::string(e.what()) + "\n");
            return kOk;
        }
        err << "usage: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*setup_cmd) {
            Rng rng = make_rng(seed);
            auto [pk, mk] = setup(rng);
            const Bytes pkb = wire::encode(pk), mkb = wire::encode(mk);
            write_files({{pk_path, pkb}, {mk_path, mkb}});
            out << "parameters " << to_hex(pk.digest()) << "\n";
            return kOk;
        }
        if (*keygen_cmd) {
            const auto list = split_list(attrs);
            if (list.empty()) throw Failure{kUsage, "--attrs lists no attributes"};
            const auto pk = decoded(pk_path, wire::decode_public);
            const auto mk = decoded(mk_path, wire::decode_master);
            check_pair(pk, mk.pk_digest, "master key");
            Rng rng = make_rng(seed);
            const auto sk = keygen(pk, mk, AttributeSet(list.begin(), list.end()), rng);
            const Bytes skb = wire::encode(sk);
            write_files({{out_path, skb}});
            out << "key for " << list.size() << " attributes, parameters " << to_hex(pk.digest()) << "\n";
            return kOk;
        }
        if (*encrypt_cmd) {
            AccessTree tree = AccessTree::leaf("_");
            try {
                tree = parse_policy(policy);
            } catch (const PolicyError& e) {
                std::string caret(e.position(), ' ');
                throw Failure{kParse, std::string("policy: ") + e.what() + "\n  " + policy + "\n  " + caret + "^"};
            }
            if (tree.root().is_leaf()) tree = AccessTree::any_of({tree});
            const auto pk = decoded(pk_path, wire::decode_public);
            const auto mk = decoded(mk_path, wire::decode_master);
            check_pair(pk, mk.pk_digest, "master key");
            const Bytes message = read_file(in_path);
            Rng rng = make_rng(seed);
            const Ciphertext ct = encrypt(pk, mk, message, tree, rng);
            const Bytes ctb = wire::encode(ct);
            write_files({{out_path, ctb}});
            out << "n=" << ct.manifest.n << " t=" << ct.manifest.table.t << " k=" << ct.manifest.table.k
                << " block_sizes=";
            for (std::size_t i = 0; i < ct.manifest.block_sizes.size(); ++i)
                out << (i ? "," : "") << ct.manifest.block_sizes[i];
            out << "\n";
            return kOk;
        }
        if (*decrypt_cmd) {
            const auto pk = decoded(pk_path, wire::decode_public);
            const auto sk = decoded(sk_path, wire::decode_secret);
            const auto ct = decoded(in_path, wire::decode_ciphertext);
            auto m = decrypt(pk, sk, ct);
            if (!m) {
                err << "refused at " << m.refusal().label() << ": " << m.refusal().reason << "\n";
                return refusal_code(m.refusal());
            }
            write_files({{out_path, m.value()}});
            out << "decrypted " << m.value().size() << " bytes\n";
            return kOk;
        }
        if (*inspect_cmd) {
            const auto ct = decoded(in_path, wire::decode_ciphertext);
            const Manifest& m = ct.manifest;
            out << "blocks " << m.n << " (present " << ct.blocks.size() << ")\n"
                << "tree_length " << m.tree_length << "\nblock_length " << m.block_length << "\n"
                << "table k=" << m.table.k << " t=" << m.table.t << " entries=" << m.table.entries.size() << "\n"
                << "parameters " << to_hex(m.pk_digest) << "\n";
            bool layout_ok = ct.blocks.size() == m.n;
            for (std::size_t i = 0; i < ct.blocks.size(); ++i) {
                const auto& b = ct.blocks[i];
                const bool ok = b.index == i + 1 && i < m.ids.size() && b.id == m.ids[i] &&
                                b.serialize().size() == m.block_sizes[i];
                layout_ok = layout_ok && ok;
                out << "block " << b.index << " bytes " << b.serialize().size() << " leaves " << b.leaves.size()
                    << (b.delta ? " delta" : "") << (b.table ? " table" : "") << (ok ? "" : " MISMATCH") << "\n";
            }
            if (!layout_ok) {
                err << "refused at integrity: blocks do not match the manifest\n";
                return kIntegrity;
            }
            if (pk_path.empty() != sk_path.empty()) throw Failure{kUsage, "--pk and --sk go together"};
            if (!pk_path.empty()) {
                const auto pk = decoded(pk_path, wire::decode_public);
                const auto sk = decoded(sk_path, wire::decode_secret);
                DecryptSession session(pk, sk, m);
                if (auto r = session.begin()) {
                    err << "refused at " << r->label() << ": " << r->reason << "\n";
                    return refusal_code(*r);
                }
                out << "att_check ok\nintegrity ok\npolicy " << session.tree().to_string() << "\n";
            }
            return kOk;
        }
        if (*bench_cmd) {
            sweep.dimension = *parse_dimension(dimension);
            for (const auto& v : split_list(values)) {
                try {
                    std::size_t used = 0;
                    sweep.values.push_back(std::stoull(v, &used));
                    if (used != v.size() || sweep.values.back() == 0) throw std::invalid_argument(v);
                } catch (const std::exception&) {
                    throw Failure{kUsage, "invalid sweep value '" + v + "'"};
                }
            }
            sweep.seed = bench_seed;
            sweep.clock = clock == "real" ? ClockMode::kReal : ClockMode::kSimulated;
            sweep.channel.bandwidth = bandwidth_mib * 1024 * 1024;
            sweep.channel.latency = latency_ms / 1000.0;
            sweep.message_bytes = static_cast<std::uint64_t>(size_mib * 1024 * 1024);
            std::vector<PipelineTrace> traces;
            std::vector<SweepRow> rows;
            try {
                rows = benchmark_sweep(sweep, trace_path.empty() ? nullptr : &traces);
            } catch (const std::invalid_argument& e) {
                throw Failure{kUsage, e.what()};
            }
            std::ostringstream csv;
            write_csv(csv, rows);
            if (out_path.empty()) out << csv.str();
            else write_files({{out_path, to_bytes(csv.str())}});
            if (!trace_path.empty()) {
                std::ostringstream t;
                if (!traces.empty()) traces.front().dump(t);
                write_files({{trace_path, to_bytes(t.str())}});
            }
            return kOk;
        }
    } catch (const Failure& f) {
        err << f.message << "\n";
        return f.code;
    }
    return kUsage;
}

}  // namespace pcpabe::cli
