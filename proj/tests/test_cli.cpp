// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>
#include <sys/stat.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chainlab/cli/cli.h"
#include "chainlab/ledger/blockstore.h"

using namespace chainlab;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("chainlab-clitest-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSimConfig = R"(chainlab v1 sha256
seed = 11
nodes = 3
mean_block_interval = 600
latency = uniform 0.2 1.5
block_reward = 50
mining_mode = poisson
duration = 12000
tx = 1200 0 1 25
)";

} // namespace

TEST_CASE("keygen: seeded runs are reproducible, key file is private") {
    TempDir dir;
    const std::string seed(64, 'a');
    const auto a = run_cli({"--workspace", dir.path.string(), "keygen", "--seed", seed, "--out",
                            "k1.key"});
    const auto b = run_cli({"--workspace", dir.path.string(), "keygen", "--seed", seed, "--out",
                            "k2.key"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.size() == 65); // 64 hex chars + newline
    CHECK(slurp(dir.path / "k1.key") == slurp(dir.path / "k2.key"));

    struct stat st {};
    REQUIRE(stat((dir.path / "k1.key").c_str(), &st) == 0);
    CHECK((st.st_mode & 0777) == 0600);

    const auto c = run_cli({"--workspace", dir.path.string(), "keygen", "--out", "k3.key"});
    CHECK(c.code == 0);
    CHECK(c.out != a.out);

    const auto bad = run_cli({"--workspace", dir.path.string(), "keygen", "--seed", "zz"});
    CHECK(bad.code == 1);
}

TEST_CASE("demo walkthrough tells the whole story, deterministically") {
    TempDir dir;
    const std::vector<std::string> args{"--workspace", dir.path.string(), "demo", "walkthrough",
                                        "--difficulty", "8", "--out-dir", "demo"};
    const auto a = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out.find("alice answers bob's challenge: verified") != std::string::npos);
    CHECK(a.out.find("wrong key answering the same challenge: rejected") != std::string::npos);
    CHECK(a.out.find("[mempool]   accepted") != std::string::npos);
    CHECK(a.out.find("confirmed at depth 6; bob hands over the bike") != std::string::npos);
    CHECK(a.out.find("bob 30") != std::string::npos);

    const auto b = run_cli(args);
    CHECK(a.out == b.out);

    // The store it wrote survives full verification.
    const auto v = run_cli({"chain", "verify", (dir.path / "demo" / "blocks.dat").string()});
    CHECK(v.code == 0);
    CHECK(v.out.find("ok blocks=9") != std::string::npos);
}

TEST_CASE("sim run: reports, csv, store; reruns byte-identical; verify round-trip") {
    TempDir dir;
    std::ofstream(dir.path / "scenario.cfg") << kSimConfig;

    const std::vector<std::string> args{"--workspace", dir.path.string(), "sim",
                                        "run",         "scenario.cfg",    "--out-dir",
                                        "out1",        "--dump-events"};
    const auto a = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out.find("chainlab-report v1") != std::string::npos);

    auto args2 = args;
    args2[6] = "out2";
    const auto b = run_cli(args2);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(dir.path / "out1" / "report.txt") == slurp(dir.path / "out2" / "report.txt"));
    CHECK(slurp(dir.path / "out1" / "confirmations.csv") ==
          slurp(dir.path / "out2" / "confirmations.csv"));
    CHECK(slurp(dir.path / "out1" / "blocks.dat") == slurp(dir.path / "out2" / "blocks.dat"));
    CHECK(slurp(dir.path / "out1" / "events.log") == slurp(dir.path / "out2" / "events.log"));
    CHECK(!slurp(dir.path / "out1" / "events.log").empty());

    const auto v = run_cli({"chain", "verify", (dir.path / "out1" / "blocks.dat").string()});
    CHECK(v.code == 0);

    const auto missing = run_cli({"--workspace", dir.path.string(), "sim", "run", "nope.cfg"});
    CHECK(missing.code == 1);

    std::ofstream(dir.path / "broken.cfg") << "chainlab v1 sha256\nnodes = 0\nduration = 1\n";
    const auto invalid = run_cli({"--workspace", dir.path.string(), "sim", "run", "broken.cfg"});
    CHECK(invalid.code == 1);
    CHECK(invalid.err.find("nodes") != std::string::npos);
}

TEST_CASE("chain verify flags a tampered store and names the block") {
    TempDir dir;
    REQUIRE(run_cli({"--workspace", dir.path.string(), "demo", "walkthrough", "--difficulty",
                     "6", "--out-dir", "demo"})
                .code == 0);
    const fs::path store = dir.path / "demo" / "blocks.dat";

    // Flip one byte inside the header of a buried block (frame 4).
    std::ifstream idx(ledger::index_path_for(store));
    std::string digest_hex;
    uint64_t offset = 0;
    for (int i = 0; i < 5; ++i)
        REQUIRE(static_cast<bool>(idx >> digest_hex >> offset));
    auto bytes = slurp(store);
    bytes[offset + 4 + 10] ^= 0x01;
    std::ofstream(store, std::ios::binary | std::ios::trunc) << bytes;

    const auto v = run_cli({"chain", "verify", store.string()});
    CHECK(v.code == 2);
    CHECK(v.out.find("FAIL") != std::string::npos);
    CHECK(v.out.find("frame=4") != std::string::npos);
    CHECK(v.out.find("block=") != std::string::npos);
}

TEST_CASE("chain inspect: summary, by block, by txid") {
    TempDir dir;
    const auto demo = run_cli({"--workspace", dir.path.string(), "demo", "walkthrough",
                               "--difficulty", "6", "--out-dir", "demo"});
    REQUIRE(demo.code == 0);
    const fs::path store = dir.path / "demo" / "blocks.dat";

    const auto summary = run_cli({"chain", "inspect", store.string()});
    CHECK(summary.code == 0);
    CHECK(summary.out.find("blocks 9") != std::string::npos);

    // Pull the payment txid out of the demo transcript.
    const std::string marker = "[proposal]  alice -> bob 30, txid ";
    const size_t at = demo.out.find(marker);
    REQUIRE(at != std::string::npos);
    const std::string payment_txid = demo.out.substr(at + marker.size(), 64);

    const auto tx = run_cli({"chain", "inspect", store.string(), "--tx", payment_txid});
    CHECK(tx.code == 0);
    CHECK(tx.out.find("confirmations 6") != std::string::npos);

    // And one block digest from the index file.
    std::ifstream idx(ledger::index_path_for(store));
    std::string digest_hex;
    uint64_t offset;
    REQUIRE(static_cast<bool>(idx >> digest_hex >> offset));
    const auto blk = run_cli({"chain", "inspect", store.string(), "--block", digest_hex});
    CHECK(blk.code == 0);
    CHECK(blk.out.find(digest_hex) != std::string::npos);

    const auto miss = run_cli({"chain", "inspect", store.string(), "--tx", std::string(64, '0')});
    CHECK(miss.code == 2);
}

TEST_CASE("attack sweep prints the table and honors --csv") {
    TempDir dir;
    const auto a = run_cli({"--workspace", dir.path.string(), "attack", "sweep", "--q",
                            "0.1,0.3", "--z", "1..3", "--trials", "2000", "--seed", "3",
                            "--csv", "curve.csv"});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("estimate") != std::string::npos);

    const std::string csv = slurp(dir.path / "curve.csv");
    CHECK(csv.find("q,z,trials,successes,estimate,std_err,analytic") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7); // header + 6 cells

    const auto b = run_cli({"--workspace", dir.path.string(), "attack", "sweep", "--q",
                            "0.1,0.3", "--z", "1..3", "--trials", "2000", "--seed", "3",
                            "--workers", "8"});
    CHECK(b.out == a.out);

    const auto bad = run_cli({"attack", "sweep", "--mode", "psychic"});
    CHECK(bad.code == 1);

    const auto analytic = run_cli({"attack", "sweep", "--q", "0.3", "--z", "6", "--mode",
                                   "analytic"});
    CHECK(analytic.code == 0);
    CHECK(analytic.out.find("0.006") != std::string::npos);
}

TEST_CASE("usage errors exit 1 with help on stderr") {
    const auto nothing = run_cli({});
    CHECK(nothing.code == 1);
    const auto unknown = run_cli({"frobnicate"});
    CHECK(unknown.code == 1);
    CHECK(!unknown.err.empty());
    const auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("chainlab") != std::string::npos);
}
