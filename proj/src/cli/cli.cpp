// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/cli/cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "chainlab/attacklab/attack.h"
#include "chainlab/crypto/ownership.h"
#include "chainlab/ledger/blockstore.h"
#include "chainlab/miner/miner.h"
#include "chainlab/simnet/simulation.h"
#include "chainlab/util/hex.h"

namespace chainlab::cli {

namespace {

namespace fs = std::filesystem;
using namespace ledger;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path resolve(const fs::path& workspace, const fs::path& p) {
    return p.is_absolute() ? p : workspace / p;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ValidationError("cannot write " + path.string());
    out << content;
}

std::vector<double> parse_double_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        out.push_back(std::stod(tok, &pos));
        if (pos != tok.size())
            throw UsageError("bad number '" + tok + "'");
    }
    if (out.empty())
        throw UsageError("empty list '" + spec + "'");
    return out;
}

// "1,2,3" or "1..6" (inclusive).
std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    if (auto dots = spec.find(".."); dots != std::string::npos) {
        const int lo = std::stoi(spec.substr(0, dots));
        const int hi = std::stoi(spec.substr(dots + 2));
        if (hi < lo)
            throw UsageError("empty range '" + spec + "'");
        for (int v = lo; v <= hi; ++v)
            out.push_back(v);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stoi(tok));
    if (out.empty())
        throw UsageError("empty list '" + spec + "'");
    return out;
}

// --- keygen ---------------------------------------------------------------

int run_keygen(const fs::path& workspace, const std::string& seed_hex, const fs::path& out_file,
               std::ostream& out) {
    crypto::KeyPair kp;
    if (!seed_hex.empty()) {
        auto seed = from_hex(seed_hex);
        if (!seed || seed->size() != 32)
            throw UsageError("--seed must be 64 hex characters");
        kp = crypto::generate_keypair(std::span<const uint8_t, 32>(seed->data(), 32));
    } else {
        kp = crypto::generate_keypair();
    }
    const fs::path path = resolve(workspace, out_file);
    crypto::write_key_file(path, std::span<const crypto::PrivateKey>(&kp.private_key, 1));
    out << kp.public_key.hex() << "\n";
    return kExitOk;
}

// --- sim run ----------------------------------------------------------------

int run_sim(const fs::path& workspace, const fs::path& config_path, const fs::path& out_dir,
            bool dump_events, unsigned workers_override, std::ostream& out) {
    simnet::SimConfig config = simnet::SimConfig::load(resolve(workspace, config_path));
    if (workers_override > 0)
        config.mine_workers = workers_override;
    simnet::Simulation sim(config);
    if (dump_events)
        sim.enable_trace();
    sim.run();
    const simnet::SimReport& report = sim.report();

    const fs::path dir = resolve(workspace, out_dir);
    fs::create_directories(dir);
    write_file(dir / "report.txt", report.render_text());
    write_file(dir / "confirmations.csv", report.render_csv());
    write_block_store(dir / "blocks.dat", sim.observer_chain());
    if (dump_events)
        write_file(dir / "events.log", sim.trace());

    out << report.render_text();
    return kExitOk;
}

// --- attack sweep -----------------------------------------------------------

int run_attack_sweep(const fs::path& workspace, const std::string& q_spec,
                     const std::string& z_spec, int trials, uint64_t seed,
                     const std::string& mode_name, int max_race, unsigned workers,
                     const std::string& csv_file, std::ostream& out) {
    attacklab::AttackMode mode;
    if (mode_name == "analytic")
        mode = attacklab::AttackMode::Analytic;
    else if (mode_name == "monte_carlo")
        mode = attacklab::AttackMode::MonteCarlo;
    else if (mode_name == "full_sim")
        mode = attacklab::AttackMode::FullSim;
    else
        throw UsageError("--mode must be analytic, monte_carlo or full_sim");

    std::vector<attacklab::AttackReport> reports;
    out << "     q   z    trials successes   estimate    std_err   analytic\n";
    for (double q : parse_double_list(q_spec)) {
        for (int z : parse_int_list(z_spec)) {
            attacklab::AttackConfig cfg;
            cfg.q = q;
            cfg.z = z;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.max_race_length = max_race;
            cfg.mode = mode;
            cfg.workers = workers;
            attacklab::AttackReport rep;
            try {
                rep = attacklab::run_attack(cfg);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            reports.push_back(rep);
            char line[160];
            char analytic[32];
            if (rep.analytic)
                std::snprintf(analytic, sizeof(analytic), "%10.4g", *rep.analytic);
            else
                std::snprintf(analytic, sizeof(analytic), "%10s", "-");
            std::snprintf(line, sizeof(line), "%6.3f %3d %9d %9d %10.4g %10.4g %s\n", rep.q,
                          rep.z, rep.trials, rep.successes, rep.estimate, rep.std_err, analytic);
            out << line;
        }
    }
    if (!csv_file.empty())
        write_file(resolve(workspace, csv_file), attacklab::render_csv(reports));
    return kExitOk;
}

// --- chain inspect / verify ---------------------------------------------------

int run_chain_inspect(const fs::path& workspace, const fs::path& store,
                      const std::string& block_hex, const std::string& tx_hex,
                      std::ostream& out) {
    const fs::path path = resolve(workspace, store);
    std::vector<Block> blocks;
    try {
        blocks = read_block_store(path);
    } catch (const ParseError& e) {
        throw ValidationError(e.what());
    }

    if (!block_hex.empty()) {
        auto want = Digest::from_hex(block_hex);
        if (!want)
            throw UsageError("--block expects a 64-hex digest");
        for (const auto& b : blocks)
            if (block_digest(b.header) == *want) {
                out << dump_block(b);
                return kExitOk;
            }
        throw ValidationError("block " + block_hex + " not found in " + path.string());
    }

    if (!tx_hex.empty()) {
        auto want = Digest::from_hex(tx_hex);
        if (!want)
            throw UsageError("--tx expects a 64-hex digest");
        ChainStore chain = load_chain(path);
        const auto container = chain.canonical_block_of_tx(*want);
        if (!container)
            throw ValidationError("tx " + tx_hex + " not on the canonical chain of " +
                                  path.string());
        out << "tx " << tx_hex << "\n";
        out << "  block         " << container->hex() << "\n";
        out << "  height        " << *chain.height_of(*container) << "\n";
        out << "  confirmations " << chain.confirmations(*want) << "\n";
        return kExitOk;
    }

    out << "blocks " << blocks.size() << "\n";
    for (const auto& b : blocks)
        out << "  height=" << b.header.height << " digest=" << block_digest(b.header).hex()
            << " txs=" << b.transactions.size() << "\n";
    return kExitOk;
}

int run_chain_verify(const fs::path& workspace, const fs::path& store, std::ostream& out) {
    const VerifyResult r = verify_store(resolve(workspace, store));
    if (r.ok) {
        out << "ok blocks=" << r.blocks << " tip_height=" << r.tip_height << " tip="
            << r.tip_digest_hex << "\n";
        return kExitOk;
    }
    out << "FAIL";
    if (r.failed_frame >= 0)
        out << " frame=" << r.failed_frame;
    if (!r.block_digest_hex.empty())
        out << " block=" << r.block_digest_hex;
    out << " reason=" << r.reason << "\n";
    return kExitValidation;
}

// --- demo walkthrough ---------------------------------------------------------

struct DemoMiner {
    ChainStore& chain;
    miner::Mempool& pool;
    unsigned workers;
    std::ostream& out;

    Block mine_next(const crypto::PublicKey& coinbase_key) {
        Block block = miner::assemble_template(pool, chain.tip(), chain.tip_height(),
                                               chain.params().block_reward,
                                               chain.params().difficulty_bits, coinbase_key, 100);
        miner::MiningJob job;
        job.header = block.header;
        const auto outcome = miner::mine(job, chain.params().difficulty_bits, workers);
        block.header.nonce = *outcome.nonce;
        const TipUpdate tu = chain.apply_block(block);
        if (!tu.tip_changed())
            throw ValidationError("demo block rejected: " + tu.rejection.describe());
        std::vector<const Block*> connected{chain.find_block(chain.tip())};
        pool.sync(chain.tip_utxo(), connected, {});
        out << "[mine]      block " << block.header.height << " nonce=" << block.header.nonce
            << " trials=" << outcome.trials << "\n            digest "
            << block_digest(block.header).hex() << "\n";
        return block;
    }
};

int run_demo(const fs::path& workspace, uint32_t difficulty, uint64_t seed,
             const std::string& out_dir, unsigned workers, std::ostream& out) {
    ChainParams params;
    params.block_reward = 50;
    params.difficulty_bits = difficulty;

    simnet::Wallet charlie(simnet::mix_seed(seed, 1));
    simnet::Wallet alice(simnet::mix_seed(seed, 2));
    simnet::Wallet bob(simnet::mix_seed(seed, 3));
    const auto& charlie_key = charlie.fresh_key();
    const auto& alice_key = alice.fresh_key();

    out << "== chainlab demo: Alice buys Bob's bike for 30 coins ==\n";
    out << "[keys]      charlie " << charlie_key.public_key.hex() << "\n";
    out << "            alice   " << alice_key.public_key.hex() << "\n";

    ChainStore chain(params);
    miner::Mempool pool;
    DemoMiner miner_loop{chain, pool, workers, out};
    out << "[genesis]   digest " << chain.genesis_digest().hex() << " reward "
        << params.block_reward << "\n";

    // Charlie mines the first block and earns the reward.
    miner_loop.mine_next(charlie_key.public_key);
    out << "[balance]   charlie " << chain.tip_utxo().balance_of(charlie_key.public_key) << "\n";

    // Charlie pays Alice 30, so she has something to spend.
    auto funding = charlie.build_payment(pool.overlay_view(chain.tip_utxo()),
                                         alice_key.public_key, 30, 0);
    auto res = pool.submit(*funding, chain.tip_utxo());
    out << "[fund]      charlie -> alice 30, txid " << txid(*funding).hex() << ", fee "
        << res.fee << "\n";
    miner_loop.mine_next(charlie.fresh_key().public_key);
    out << "[balance]   alice " << alice.balance(chain.tip_utxo()) << "\n";

    // Bob checks Alice really owns the coins she claims: fresh challenge,
    // only the matching private key can answer.
    simnet::SimRng challenge_rng(simnet::mix_seed(seed, 99));
    crypto::Challenge challenge;
    for (int i = 0; i < 4; ++i) {
        const uint64_t v = challenge_rng.next_u64();
        for (int b = 0; b < 8; ++b)
            challenge.nonce_bytes.push_back(uint8_t(v >> (56 - 8 * b)));
    }
    const auto response = crypto::prove_ownership(alice_key.private_key, challenge);
    out << "[ownership] alice answers bob's challenge: "
        << (crypto::verify_ownership(alice_key.public_key, challenge, response) ? "verified"
                                                                                : "REJECTED")
        << "\n";
    const auto& bob_probe = bob.fresh_key();
    const auto forged = crypto::prove_ownership(bob_probe.private_key, challenge);
    out << "[ownership] wrong key answering the same challenge: "
        << (crypto::verify_ownership(alice_key.public_key, challenge, forged) ? "verified"
                                                                              : "rejected")
        << "\n";

    // Alice asks Bob for a fresh key and broadcasts her payment.
    const auto& bob_key = bob.fresh_key();
    auto payment = alice.build_payment(pool.overlay_view(chain.tip_utxo()),
                                       bob_key.public_key, 30, 0);
    res = pool.submit(*payment, chain.tip_utxo());
    const Digest payment_id = txid(*payment);
    out << "[proposal]  alice -> bob 30, txid " << payment_id.hex() << "\n";
    out << "[mempool]   accepted, fee " << res.fee << "\n";

    // Some agent (Charlie again) wins the nonce race and confirms it.
    miner_loop.mine_next(charlie.fresh_key().public_key);
    out << "[confirm]   payment depth " << chain.confirmations(payment_id) << "\n";

    // Bob waits for the standard six confirmations before handing anything
    // over.
    while (chain.confirmations(payment_id) < 6) {
        miner_loop.mine_next(charlie.fresh_key().public_key);
        out << "[confirm]   payment depth " << chain.confirmations(payment_id) << "\n";
    }
    out << "[done]      confirmed at depth 6; bob hands over the bike\n";
    out << "[balance]   alice " << alice.balance(chain.tip_utxo()) << ", bob "
        << bob.balance(chain.tip_utxo()) << ", charlie " << charlie.balance(chain.tip_utxo())
        << "\n";

    if (!out_dir.empty()) {
        const fs::path dir = resolve(workspace, out_dir);
        fs::create_directories(dir);
        std::vector<Block> blocks;
        for (const Digest& d : chain.canonical_chain())
            blocks.push_back(*chain.find_block(d));
        write_block_store(dir / "blocks.dat", blocks);
        out << "[store]     wrote " << blocks.size() << " blocks to "
            << (dir / "blocks.dat").string() << "\n";
    }
    return kExitOk;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"proof-of-work ledger, network simulator and attack lab"};
    app.name("chainlab");

    std::string workspace_opt;
    app.add_option("--workspace", workspace_opt,
                   "working directory for relative paths (default: $CHAINLAB_WORKSPACE or .)");

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a key pair and write the key file");
    std::string keygen_seed;
    std::string keygen_out = "wallet.key";
    keygen->add_option("--seed", keygen_seed, "64-hex seed for a reproducible key");
    keygen->add_option("--out", keygen_out, "key file path");

    // sim run
    auto* sim = app.add_subcommand("sim", "network simulation");
    auto* sim_run = sim->add_subcommand("run", "run a scenario config");
    std::string sim_config;
    std::string sim_out_dir = "sim-out";
    bool sim_dump_events = false;
    unsigned sim_workers = 0;
    sim_run->add_option("config", sim_config, "scenario config file")->required();
    sim_run->add_option("--out-dir", sim_out_dir, "output directory");
    sim_run->add_flag("--dump-events", sim_dump_events, "also write the full event log");
    sim_run->add_option("--workers", sim_workers, "override mining workers (real_pow)");

    // attack sweep
    auto* attack = app.add_subcommand("attack", "double-spend experiments");
    auto* sweep = attack->add_subcommand("sweep", "sweep attacker share and depth");
    std::string sweep_q = "0.1,0.2,0.3,0.4";
    std::string sweep_z = "1..6";
    int sweep_trials = 10000;
    uint64_t sweep_seed = 1;
    std::string sweep_mode = "monte_carlo";
    int sweep_max_race = 10000;
    unsigned sweep_workers = 1;
    std::string sweep_csv;
    sweep->add_option("--q", sweep_q, "attacker shares, comma separated");
    sweep->add_option("--z", sweep_z, "confirmation depths, comma separated or A..B");
    sweep->add_option("--trials", sweep_trials, "races per cell");
    sweep->add_option("--seed", sweep_seed, "experiment seed");
    sweep->add_option("--mode", sweep_mode, "analytic | monte_carlo | full_sim");
    sweep->add_option("--max-race", sweep_max_race, "race cutoff in steps");
    sweep->add_option("--workers", sweep_workers, "parallel workers");
    sweep->add_option("--csv", sweep_csv, "also write results as CSV");

    // chain inspect/verify
    auto* chain = app.add_subcommand("chain", "block store tools");
    auto* inspect = chain->add_subcommand("inspect", "decode and print store contents");
    std::string inspect_store, inspect_block, inspect_tx;
    inspect->add_option("store", inspect_store, "block store file")->required();
    inspect->add_option("--block", inspect_block, "dump one block by digest");
    inspect->add_option("--tx", inspect_tx, "locate a transaction by txid");
    auto* verify = chain->add_subcommand("verify", "full replay validation from genesis");
    std::string verify_store_path;
    verify->add_option("store", verify_store_path, "block store file")->required();

    // demo walkthrough
    auto* demo = app.add_subcommand("demo", "guided demonstrations");
    auto* walkthrough = demo->add_subcommand("walkthrough",
                                             "the Alice-pays-Bob story, end to end");
    uint32_t demo_difficulty = 12;
    uint64_t demo_seed = 7;
    unsigned demo_workers = 1;
    std::string demo_out_dir;
    walkthrough->add_option("--difficulty", demo_difficulty, "leading zero bits required");
    walkthrough->add_option("--seed", demo_seed, "demo seed");
    walkthrough->add_option("--workers", demo_workers, "mining workers");
    walkthrough->add_option("--out-dir", demo_out_dir, "also write the demo chain here");

    app.require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << app.help();
        return kExitUsage;
    }

    fs::path workspace = workspace_opt.empty()
                             ? (std::getenv("CHAINLAB_WORKSPACE") ? std::getenv("CHAINLAB_WORKSPACE")
                                                                  : ".")
                             : fs::path(workspace_opt);

    try {
        if (keygen->parsed())
            return run_keygen(workspace, keygen_seed, keygen_out, out);
        if (sim_run->parsed())
            return run_sim(workspace, sim_config, sim_out_dir, sim_dump_events, sim_workers, out);
        if (sweep->parsed())
            return run_attack_sweep(workspace, sweep_q, sweep_z, sweep_trials, sweep_seed,
                                    sweep_mode, sweep_max_race, sweep_workers, sweep_csv, out);
        if (inspect->parsed())
            return run_chain_inspect(workspace, inspect_store, inspect_block, inspect_tx, out);
        if (verify->parsed())
            return run_chain_verify(workspace, verify_store_path, out);
        if (walkthrough->parsed())
            return run_demo(workspace, demo_difficulty, demo_seed, demo_out_dir, demo_workers,
                            out);
        err << "error: missing subcommand\n" << app.help();
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const simnet::InvalidConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

} // namespace chainlab::cli
