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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "pcpabe/cli.hpp"
#include "pcpabe/wire.hpp"

using namespace pcpabe;
namespace fs = std::filesystem;

namespace {

struct Tool {
    fs::path dir;
    std::string out, err;

    Tool() {
        dir = fs::temp_directory_path() / ("pcpabe-cli-" + std::to_string(::getpid()) + "-" +
                                          std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(dir);
    }
    ~Tool() { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    int operator()(std::vector<std::string> args) {
        args.insert(args.begin(), "pcpabe");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream o, e;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
        out = o.str();
        err = e.str();
        return code;
    }

    void write(const std::string& name, const Bytes& bytes) const {
        std::ofstream f(path(name), std::ios::binary);
        f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    Bytes read(const std::string& name) const {
        std::ifstream f(path(name), std::ios::binary);
        return Bytes(std::istreambuf_iterator<char>(f), {});
    }

    void keys() {
        REQUIRE(operator()({"setup", "--pk", path("pk"), "--mk", path("mk"), "--seed", "3"}) == cli::kOk);
        REQUIRE(operator()({"keygen", "--pk", path("pk"), "--mk", path("mk"), "--attrs", "A,B", "--out",
                            path("ab.sk")}) == cli::kOk);
        REQUIRE(operator()({"keygen", "--pk", path("pk"), "--mk", path("mk"), "--attrs", "A,C", "--out",
                            path("ac.sk")}) == cli::kOk);
        REQUIRE(operator()({"keygen", "--pk", path("pk"), "--mk", path("mk"), "--attrs", "Z", "--out",
                            path("z.sk")}) == cli::kOk);
    }

    int encrypt(const std::string& policy, const std::string& in, const std::string& out_name) {
        return operator()({"encrypt", "--pk", path("pk"), "--mk", path("mk"), "--policy", policy, "--in",
                           path(in), "--out", path(out_name)});
    }
    int decrypt(const std::string& sk, const std::string& in, const std::string& out_name) {
        return operator()({"decrypt", "--pk", path("pk"), "--sk", path(sk), "--in", path(in), "--out",
                           path(out_name)});
    }
};

}  // namespace

TEST_CASE("setup prints a digest and never repeats one") {
    Tool t;
    REQUIRE(t({"setup", "--pk", t.path("pk1"), "--mk", t.path("mk1")}) == cli::kOk);
    const std::string first = t.out;
    REQUIRE(t({"setup", "--pk", t.path("pk2"), "--mk", t.path("mk2")}) == cli::kOk);
    CHECK_FALSE(first.empty());
    CHECK(first != t.out);
    CHECK(wire::sniff(t.read("pk1")) == wire::kMagicPublic);
    CHECK(wire::sniff(t.read("mk1")) == wire::kMagicMaster);
}

TEST_CASE("round trip and refusal exit codes") {
    Tool t;
    t.keys();
    auto rng = Rng::seeded(61);
    const Bytes msg = rng.bytes(1 << 20);
    t.write("msg", msg);
    REQUIRE(t.encrypt("(A and B) or (C and D)", "msg", "ct") == cli::kOk);
    CHECK(t.out.find("3") != std::string::npos);
    CHECK(wire::decode_ciphertext(t.read("ct")).blocks.size() == 3);

    CHECK(t.decrypt("ab.sk", "ct", "out") == cli::kOk);
    CHECK(t.read("out") == msg);

    CHECK(t.decrypt("ac.sk", "ct", "fail1") == cli::kDecrypt);
    CHECK(t.err.find("block 1") != std::string::npos);
    CHECK_FALSE(fs::exists(t.path("fail1")));

    CHECK(t.decrypt("z.sk", "ct", "fail2") == cli::kAttCheck);
    CHECK(t.err.find("att_check") != std::string::npos);

    Ciphertext ct = wire::decode_ciphertext(t.read("ct"));
    ct.blocks.pop_back();
    t.write("short", wire::encode(ct));
    CHECK(t.decrypt("ab.sk", "short", "fail3") == cli::kIntegrity);
    CHECK(t.err.find("integrity") != std::string::npos);
    CHECK_FALSE(fs::exists(t.path("fail3")));

    CHECK(t({"inspect", "--in", t.path("ct")}) == cli::kOk);
    CHECK(t({"inspect", "--in", t.path("ct"), "--pk", t.path("pk"), "--sk", t.path("ac.sk")}) == cli::kOk);
}

TEST_CASE("empty input round trips") {
    Tool t;
    t.keys();
    t.write("empty", {});
    REQUIRE(t.encrypt("A", "empty", "ct") == cli::kOk);
    REQUIRE(t.decrypt("ab.sk", "ct", "out") == cli::kOk);
    CHECK(fs::exists(t.path("out")));
    CHECK(t.read("out").empty());
}

TEST_CASE("usage, parse and io errors") {
    Tool t;
    t.keys();
    t.write("msg", to_bytes("hi"));
    CHECK(t({}) == cli::kUsage);
    CHECK(t({"frobnicate"}) == cli::kUsage);
    CHECK(t({"encrypt", "--pk", t.path("pk")}) == cli::kUsage);
    CHECK(t({"--help"}) == cli::kOk);

    CHECK(t.encrypt("A and (B or", "msg", "ct") == cli::kParse);
    CHECK(t.err.find("position") != std::string::npos);
    CHECK_FALSE(fs::exists(t.path("ct")));

    CHECK(t({"keygen", "--pk", t.path("pk"), "--mk", t.path("mk"), "--attrs", "", "--out", t.path("e.sk")}) ==
          cli::kUsage);
    CHECK(t({"keygen", "--pk", t.path("pk"), "--mk", t.path("mk"), "--attrs", " , ", "--out", t.path("e.sk")}) ==
          cli::kUsage);

    REQUIRE(t({"setup", "--pk", t.path("pk2"), "--mk", t.path("mk2")}) == cli::kOk);
    CHECK(t({"keygen", "--pk", t.path("pk"), "--mk", t.path("mk2"), "--attrs", "A", "--out", t.path("x.sk")}) ==
          cli::kUsage);
    CHECK_FALSE(fs::exists(t.path("x.sk")));

    CHECK(t.decrypt("ab.sk", "missing", "out") == cli::kIo);
    t.write("junk", to_bytes("PCCT\x01garbage"));
    CHECK(t.decrypt("ab.sk", "junk", "out") == cli::kParse);
    t.write("zero", {});
    CHECK(t.decrypt("ab.sk", "zero", "out") == cli::kParse);
    CHECK(t.decrypt("pk", "msg", "out") == cli::kParse);  // key file of the wrong kind

    CHECK(t({"setup", "--pk", t.path("no/such/dir/pk"), "--mk", t.path("mk3")}) == cli::kIo);
    CHECK_FALSE(fs::exists(t.path("mk3")));
    for (const auto& e : fs::directory_iterator(t.dir))
        CHECK(e.path().extension() != ".partial");

    CHECK(t({"bench", "--sweep", "bogus"}) == cli::kUsage);
    CHECK(t({"bench", "--sweep", "size", "--clock", "wall"}) == cli::kUsage);
    CHECK(t({"bench", "--sweep", "size", "--channel-bandwidth", "0"}) == cli::kUsage);
}

TEST_CASE("bench is deterministic under a seed") {
    Tool t;
    const std::vector<std::string> args{"bench", "--sweep", "size", "--sizes", "1,2", "--seed", "7", "--leaves",
                                        "12", "--gates", "3", "--fanout", "2"};
    REQUIRE(t(args) == cli::kOk);
    const std::string first = t.out;
    REQUIRE(t(args) == cli::kOk);
    CHECK(first == t.out);
    CHECK(first.rfind("dimension,value,scheme,total_seconds,fill_seconds,drain_seconds\n", 0) == 0);
    CHECK(std::count(first.begin(), first.end(), '\n') == 5);

    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", t.path("bench.csv"), "--trace", t.path("trace.csv")});
    REQUIRE(t(with_out) == cli::kOk);
    const Bytes csv = t.read("bench.csv");
    CHECK(std::string(csv.begin(), csv.end()) == first);
    const Bytes trace = t.read("trace.csv");
    CHECK(std::string(trace.begin(), trace.end()).rfind("block,stage,start,end\n", 0) == 0);
}

TEST_CASE("wire format rejects malformed records") {
    auto rng = Rng::seeded(62);
    const auto [pk, mk] = setup(rng);
    const Bytes good = wire::encode(pk);
    CHECK(wire::decode_public(good).digest() == pk.digest());

    Bytes unknown = good;
    unknown.insert(unknown.end(), {0x7f, 0, 0, 0, 1, 0});
    CHECK_THROWS_AS(wire::decode_public(unknown), DecodeError);

    Bytes version = good;
    version[4] = 0x02;
    CHECK_THROWS_AS(wire::decode_public(version), DecodeError);

    Bytes truncated(good.begin(), good.end() - 1);
    CHECK_THROWS_AS(wire::decode_public(truncated), DecodeError);

    CHECK_THROWS_AS(wire::decode_master(good), DecodeError);
    const AttributeKey sk = keygen(pk, mk, {"A", "B"}, rng);
    const AttributeKey back = wire::decode_secret(wire::encode(sk));
    CHECK(back.attributes() == sk.attributes());
    CHECK(back.d == sk.d);
    CHECK(wire::decode_master(wire::encode(mk)).q == mk.q);

    const Ciphertext ct = encrypt(pk, mk, to_bytes("abc"), parse_policy("A or B"), rng);
    const Bytes c = wire::encode(ct);
    CHECK(wire::encode(wire::decode_ciphertext(c)) == c);
    CHECK(wire::sniff(to_bytes("nope")).empty());
}
