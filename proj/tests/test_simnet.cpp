// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cmath>

#include "chainlab/simnet/simulation.h"
#include "helpers.h"

using namespace chainlab;
using namespace chainlab::simnet;
using namespace chainlab::ledger;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.seed = 42;
    cfg.node_count = 2;
    cfg.mean_block_interval = 600 * kMicrosPerSecond;
    cfg.latency.kind = LatencyModel::Kind::Fixed;
    cfg.latency.fixed = 1 * kMicrosPerSecond;
    cfg.block_reward = 50;
    cfg.mining_mode = MiningMode::Poisson;
    cfg.duration = 20 * 600 * kMicrosPerSecond;
    return cfg;
}

} // namespace

TEST_CASE("seconds parse and format exactly") {
    CHECK(parse_seconds("600") == 600 * kMicrosPerSecond);
    CHECK(parse_seconds("0.25") == 250'000);
    CHECK(parse_seconds("1.000001") == 1'000'001);
    CHECK(parse_seconds("0.000001") == 1);
    CHECK(format_seconds(600 * kMicrosPerSecond) == "600.000000");
    CHECK(format_seconds(1'000'001) == "1.000001");
    CHECK_THROWS_AS(parse_seconds("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_seconds("1.1234567"), std::invalid_argument);
    CHECK_THROWS_AS(parse_seconds("-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_seconds(""), std::invalid_argument);
    CHECK(parse_seconds(format_seconds(1234567)) == 1234567);
}

TEST_CASE("config files parse, round-trip, and reject junk by field") {
    const std::string text = R"(chainlab v1 sha256
# two mining nodes, one slow link
seed = 7
nodes = 2
shares = 0.7 0.3
mean_block_interval = 600
latency = uniform 0.5 2
partition = 600 1200 : 0 | 1
block_reward = 50
difficulty_bits = 12
mining_mode = poisson
duration = 30000
max_txs_per_block = 64
tx = 100 0 1 30
tx = 200 1 0 10 2
attacker = 1 0
)";
    const SimConfig cfg = SimConfig::parse(text);
    CHECK(cfg.seed == 7);
    CHECK(cfg.node_count == 2);
    CHECK(cfg.hash_shares == std::vector<double>{0.7, 0.3});
    CHECK(cfg.latency.kind == LatencyModel::Kind::Uniform);
    CHECK(cfg.latency.min == 500'000);
    CHECK(cfg.latency.max == 2'000'000);
    REQUIRE(cfg.partitions.size() == 1);
    CHECK(cfg.partitions[0].side_a == std::vector<int>{0});
    CHECK(cfg.partitions[0].side_b == std::vector<int>{1});
    REQUIRE(cfg.workload.size() == 2);
    CHECK(cfg.workload[1].fee == 2);
    CHECK(cfg.attack.enabled);
    CHECK(cfg.attack.attacker_node == 1);

    // Canonical text is parseable and a fixed point.
    const SimConfig back = SimConfig::parse(cfg.canonical_text());
    CHECK(back.canonical_text() == cfg.canonical_text());

    auto expect_field = [](const std::string& body, const std::string& field) {
        try {
            SimConfig::parse(body);
            FAIL_CHECK("expected rejection naming ", field);
        } catch (const InvalidConfigError& e) {
            CHECK(e.field() == field);
        }
    };
    expect_field("nonsense\n", "header");
    expect_field("chainlab v1 sha256\nduration = 10\nshares = 0.5 0.6\nnodes = 2\n", "shares");
    expect_field("chainlab v1 sha256\nnodes = 1\n", "duration");
    expect_field("chainlab v1 sha256\nduration = 10\nwarp = 9\n", "warp");
    expect_field("chainlab v1 sha256\nduration = 10\npartition = 1 2 : 0 0 | 1\nnodes = 2\n",
                 "partition");
    expect_field("chainlab v1 sha256\nduration = 10\ntx = 1 0 5 10\n", "tx[0]");
}

TEST_CASE("the walkthrough scenario: one node, one payment, depth six") {
    SimConfig cfg = base_config();
    cfg.node_count = 1;
    cfg.duration = 14 * 600 * kMicrosPerSecond; // room for a dozen blocks
    cfg.workload.push_back({2 * 600 * kMicrosPerSecond, 0, 0, 30, 0});

    Simulation sim(cfg);
    sim.run();
    const SimReport& rep = sim.report();

    REQUIRE(rep.txs.size() == 1);
    const TxRecord& rec = rep.txs[0];
    REQUIRE(rec.built);
    CHECK(rec.depth1_time.has_value());
    CHECK(rec.depth6_time.has_value());
    CHECK(rec.final_depth >= 6);

    // The recipient ends up owning exactly the transferred 30 coins.
    const NodeState& node = sim.node(0);
    CHECK(node.chain.tip_utxo().balance_of(rec.recipient) == 30);

    // Per-node ledger invariants hold at the end.
    CHECK(node.chain.tip_utxo().digest() == test::replay_utxo(node.chain).digest());
    CHECK(test::no_double_spend(node.chain));
}

TEST_CASE("identical seeds give identical reports, different seeds differ") {
    SimConfig cfg = base_config();
    cfg.workload.push_back({600 * kMicrosPerSecond, 0, 1, 10, 0});

    Simulation a(cfg), b(cfg);
    a.run();
    b.run();
    CHECK(a.report().event_log_digest_hex == b.report().event_log_digest_hex);
    CHECK(a.report().render_text() == b.report().render_text());
    CHECK(a.report().render_csv() == b.report().render_csv());

    SimConfig other = cfg;
    other.seed = 43;
    Simulation c(other);
    c.run();
    CHECK(c.report().event_log_digest_hex != a.report().event_log_digest_hex);
}

TEST_CASE("all nodes converge to one tip; partitions fork and heal") {
    SimConfig cfg = base_config();
    cfg.node_count = 2;
    cfg.hash_shares = {0.5, 0.5};
    // Partitioned for 20 mean intervals, then long heal time.
    const SimTime interval = cfg.mean_block_interval;
    cfg.partitions.push_back({0, 20 * interval, {0}, {1}});
    cfg.duration = 45 * interval;

    Simulation sim(cfg);
    sim.run();
    const SimReport& rep = sim.report();

    CHECK(rep.node_tips[0].first == rep.node_tips[1].first);
    CHECK(rep.max_reorg_depth >= 1);
    CHECK(rep.fork_count >= 1);
    CHECK(rep.orphaned_blocks >= 1);

    for (int i = 0; i < 2; ++i) {
        const NodeState& node = sim.node(i);
        CHECK(node.chain.tip_utxo().digest() == test::replay_utxo(node.chain).digest());
        CHECK(node.chain.tip_utxo().total_value() == test::expected_total_value(node.chain));
        CHECK(test::no_double_spend(node.chain));
    }
}

TEST_CASE("block production matches the configured rate and shares") {
    SimConfig cfg = base_config();
    cfg.node_count = 2;
    cfg.hash_shares = {0.7, 0.3};
    cfg.duration = 250 * cfg.mean_block_interval;
    cfg.latency.fixed = 100'000; // 0.1 s: quick relay

    Simulation sim(cfg);
    sim.run();
    const SimReport& rep = sim.report();

    const double expected = 250.0;
    CHECK(double(rep.total_blocks_mined) > expected * 0.85);
    CHECK(double(rep.total_blocks_mined) < expected * 1.15);

    // Within 3 sigma of the binomial around each share.
    const double n = double(rep.total_blocks_mined);
    const double sigma = std::sqrt(n * 0.7 * 0.3);
    CHECK(std::abs(double(rep.blocks_mined[0]) - 0.7 * n) < 3 * sigma + 1);
}

TEST_CASE("mining with an empty mempool broadcasts coinbase-only blocks") {
    SimConfig cfg = base_config();
    cfg.duration = 30 * cfg.mean_block_interval;
    Simulation sim(cfg);
    sim.run();
    REQUIRE(sim.report().total_blocks_mined > 0);
    const auto chain = sim.observer_chain();
    for (size_t i = 1; i < chain.size(); ++i)
        CHECK(chain[i].transactions.size() == 1);
    // Both nodes saw every block.
    CHECK(sim.report().node_tips[0].first == sim.report().node_tips[1].first);
}

TEST_CASE("out-of-order delivery matches in-order delivery (orphan buffering)") {
    // Mining silenced: the mean interval dwarfs the duration.
    SimConfig cfg = base_config();
    cfg.node_count = 2;
    cfg.mean_block_interval = 1'000'000 * kMicrosPerSecond;
    cfg.duration = 100 * kMicrosPerSecond;

    // Craft three blocks on a scratch chain with the same parameters.
    ChainParams params;
    params.block_reward = cfg.block_reward;
    params.difficulty_bits = 0;
    ChainStore scratch(params);
    const auto miner_kp = test::keypair_from(1);
    std::vector<Block> blocks;
    for (uint64_t i = 0; i < 3; ++i) {
        const Block b = test::block_on(scratch, scratch.tip(), {}, miner_kp.public_key, i);
        REQUIRE(scratch.apply_block(b).kind == TipUpdate::Kind::Extended);
        blocks.push_back(b);
    }

    Simulation in_order(cfg);
    for (uint64_t i = 0; i < 3; ++i)
        in_order.inject_block(0, blocks[i], SimTime(10 + i));
    in_order.run();

    Simulation reversed(cfg);
    for (uint64_t i = 0; i < 3; ++i)
        reversed.inject_block(0, blocks[2 - i], SimTime(10 + i));
    reversed.run();

    CHECK(in_order.node(0).chain.tip() == scratch.tip());
    CHECK(reversed.node(0).chain.tip() == scratch.tip());
    CHECK(reversed.node(0).chain.tip_utxo().digest() ==
          in_order.node(0).chain.tip_utxo().digest());
    CHECK(reversed.node(0).chain.orphan_count() == 0);
}

TEST_CASE("re-delivering a known block schedules nothing new") {
    SimConfig cfg = base_config();
    cfg.node_count = 2;
    cfg.mean_block_interval = 1'000'000 * kMicrosPerSecond;
    cfg.duration = 100 * kMicrosPerSecond;

    ChainParams params;
    params.block_reward = cfg.block_reward;
    params.difficulty_bits = 0;
    ChainStore scratch(params);
    const Block b = test::block_on(scratch, scratch.tip(), {}, test::keypair_from(1).public_key, 1);

    Simulation sim(cfg);
    sim.inject_block(0, b, 10);
    sim.inject_block(0, b, 20); // duplicate
    const uint64_t before = sim.events_scheduled();
    sim.run();
    // Only mining reschedules could add events; applying the duplicate adds
    // none beyond the re-target the first application caused.
    CHECK(sim.events_scheduled() <= before + 1);
    CHECK(sim.node(0).chain.tip() == block_digest(b.header));
}

TEST_CASE("invalid payloads are dropped and counted") {
    SimConfig cfg = base_config();
    cfg.node_count = 2;
    cfg.mean_block_interval = 1'000'000 * kMicrosPerSecond;
    cfg.duration = 100 * kMicrosPerSecond;

    ChainParams params;
    params.block_reward = cfg.block_reward;
    params.difficulty_bits = 0;
    ChainStore scratch(params);
    Block bad = test::block_on(scratch, scratch.tip(), {}, test::keypair_from(1).public_key, 1);
    bad.transactions[0].outputs[0].amount = params.block_reward + 1; // coinbase overpays
    bad.header.tx_commitment = tx_commitment(bad.transactions);

    Simulation sim(cfg);
    sim.inject_block(0, bad, 10);
    sim.run();
    CHECK(sim.report().invalid_payloads == 1);
    CHECK(sim.node(0).chain.tip_height() == 0);
}

TEST_CASE("real proof-of-work mode mines valid headers at the configured bits") {
    SimConfig cfg = base_config();
    cfg.mining_mode = MiningMode::RealPow;
    cfg.difficulty_bits = 8;
    cfg.duration = 12 * cfg.mean_block_interval;
    cfg.workload.push_back({600 * kMicrosPerSecond, 0, 1, 20, 0});

    Simulation sim(cfg);
    sim.run();
    const SimReport& rep = sim.report();
    REQUIRE(rep.total_blocks_mined > 0);
    CHECK(rep.node_tips[0].first == rep.node_tips[1].first);

    const auto chain = sim.observer_chain();
    for (size_t i = 1; i < chain.size(); ++i) {
        CHECK(chain[i].header.difficulty_bits == 8);
        CHECK(crypto::leading_zero_bits(block_digest(chain[i].header)) >= 8);
    }

    // Worker count does not change the simulation.
    SimConfig cfg8 = cfg;
    cfg8.mine_workers = 8;
    Simulation sim8(cfg8);
    sim8.run();
    CHECK(sim8.report().event_log_digest_hex == rep.event_log_digest_hex);
    CHECK(sim8.report().render_text() == rep.render_text());
}

TEST_CASE("transactions queued across a partition are delivered on heal") {
    SimConfig cfg = base_config();
    cfg.node_count = 2;
    cfg.hash_shares = {1.0, 0.0}; // only node 0 mines
    const SimTime interval = cfg.mean_block_interval;
    cfg.partitions.push_back({0, 10 * interval, {0}, {1}});
    cfg.duration = 30 * interval;
    // Node 0 pays node 1 while the link is down: the broadcast is held at the
    // partition boundary and lands after the heal.
    cfg.workload.push_back({2 * interval, 0, 1, 10, 0});

    Simulation sim(cfg);
    sim.run();
    const SimReport& rep = sim.report();
    REQUIRE(rep.txs[0].built);
    CHECK(rep.txs[0].final_depth >= 1);
    CHECK(rep.node_tips[0].first == rep.node_tips[1].first);
}
