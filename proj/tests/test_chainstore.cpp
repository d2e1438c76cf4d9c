// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <algorithm>

#include "chainlab/simnet/rng.h"
#include "helpers.h"

using namespace chainlab;
using namespace chainlab::ledger;

namespace {

ChainParams test_params() {
    ChainParams p;
    p.block_reward = 50;
    p.difficulty_bits = 0;
    return p;
}

} // namespace

TEST_CASE("extending the tip, sibling ties, confirmations") {
    ChainStore chain(test_params());
    const auto miner_a = test::keypair_from(1);
    const auto miner_b = test::keypair_from(2);

    const Block b1 = test::block_on(chain, chain.tip(), {}, miner_a.public_key, 1);
    auto tu = chain.apply_block(b1);
    CHECK(tu.kind == TipUpdate::Kind::Extended);
    CHECK(chain.tip_height() == 1);
    CHECK(chain.tip() == block_digest(b1.header));

    // Equal-length sibling: first seen wins, tip unchanged.
    const Block b1_sibling = test::block_on(chain, chain.genesis_digest(), {},
                                            miner_b.public_key, 2);
    tu = chain.apply_block(b1_sibling);
    CHECK(tu.kind == TipUpdate::Kind::Unchanged);
    CHECK(chain.tip() == block_digest(b1.header));

    // Duplicates are idempotent no-ops.
    tu = chain.apply_block(b1);
    CHECK(tu.kind == TipUpdate::Kind::Duplicate);
    CHECK(chain.block_count() == 3);

    const Digest cb1 = txid(b1.transactions.front());
    CHECK(chain.confirmations(cb1) == 1);
    const Digest genesis_cb = txid(chain.genesis().transactions.front());
    CHECK(chain.confirmations(genesis_cb) == 2);

    // Five more blocks put the first coinbase at the paper's waiting depth.
    Digest parent = chain.tip();
    for (uint64_t i = 0; i < 5; ++i) {
        const Block b = test::block_on(chain, parent, {}, miner_a.public_key, 10 + i);
        REQUIRE(chain.apply_block(b).kind == TipUpdate::Kind::Extended);
        parent = chain.tip();
    }
    CHECK(chain.confirmations(cb1) == 6);

    // The sibling's coinbase sits on an abandoned fork: depth 0.
    CHECK(chain.confirmations(txid(b1_sibling.transactions.front())) == 0);
}

TEST_CASE("a longer side branch reorganizes; UTXO matches a genesis replay") {
    ChainStore chain(test_params());
    const auto honest = test::keypair_from(1);
    const auto rival = test::keypair_from(2);

    const Block a1 = test::block_on(chain, chain.genesis_digest(), {}, honest.public_key, 1);
    REQUIRE(chain.apply_block(a1).kind == TipUpdate::Kind::Extended);
    const Block a2 = test::block_on(chain, chain.tip(), {}, honest.public_key, 2);
    REQUIRE(chain.apply_block(a2).kind == TipUpdate::Kind::Extended);

    // Rival branch of length 3 off the genesis.
    const Block r1 = test::block_on(chain, chain.genesis_digest(), {}, rival.public_key, 3);
    REQUIRE(chain.apply_block(r1).kind == TipUpdate::Kind::Unchanged);
    const Block r2 = test::block_on(chain, block_digest(r1.header), {}, rival.public_key, 4);
    REQUIRE(chain.apply_block(r2).kind == TipUpdate::Kind::Unchanged);
    const Block r3 = test::block_on(chain, block_digest(r2.header), {}, rival.public_key, 5);

    const TipUpdate tu = chain.apply_block(r3);
    CHECK(tu.kind == TipUpdate::Kind::Reorganized);
    CHECK(tu.rolled_back == 2);
    CHECK(tu.applied == 3);
    CHECK(chain.tip() == block_digest(r3.header));
    CHECK(chain.tip_height() == 3);

    CHECK(chain.tip_utxo() == test::replay_utxo(chain));
    CHECK(chain.tip_utxo().digest() == test::replay_utxo(chain).digest());
    CHECK(chain.tip_utxo().balance_of(honest.public_key) == 0);
    CHECK(chain.tip_utxo().balance_of(rival.public_key) == 150);
}

TEST_CASE("orphans are buffered and connected when the parent arrives") {
    ChainStore chain(test_params());
    const auto miner = test::keypair_from(1);

    const Block b1 = test::block_on(chain, chain.genesis_digest(), {}, miner.public_key, 1);
    ChainStore scratch(test_params());
    REQUIRE(scratch.apply_block(b1).kind == TipUpdate::Kind::Extended);
    const Block b2 = test::block_on(scratch, scratch.tip(), {}, miner.public_key, 2);
    REQUIRE(scratch.apply_block(b2).kind == TipUpdate::Kind::Extended);
    const Block b3 = test::block_on(scratch, scratch.tip(), {}, miner.public_key, 3);

    CHECK(chain.apply_block(b3).kind == TipUpdate::Kind::Orphaned);
    CHECK(chain.apply_block(b2).kind == TipUpdate::Kind::Orphaned);
    CHECK(chain.orphan_count() == 2);

    const TipUpdate tu = chain.apply_block(b1);
    CHECK(tu.kind == TipUpdate::Kind::Extended);
    CHECK(tu.connected_orphans == 2);
    CHECK(chain.orphan_count() == 0);
    CHECK(chain.tip_height() == 3);
    CHECK(chain.tip() == block_digest(b3.header));
    CHECK(chain.tip_utxo() == test::replay_utxo(chain));
}

TEST_CASE("the orphan pool is bounded") {
    ChainStore chain(test_params());
    const auto miner = test::keypair_from(1);
    // Orphans referencing parents the store will never see.
    for (uint64_t i = 0; i < ChainStore::kMaxOrphans + 8; ++i) {
        Block b = test::block_on(chain, chain.genesis_digest(), {}, miner.public_key, 100 + i);
        b.header.prev_digest = crypto::sha256(std::to_string(i)); // unknown parent
        b.header.height = 5;
        CHECK(chain.apply_block(b).kind == TipUpdate::Kind::Orphaned);
    }
    CHECK(chain.orphan_count() == ChainStore::kMaxOrphans);
}

TEST_CASE("randomized block trees: replay equivalence, conservation, no double spend") {
    simnet::SimRng rng(0xc0ffee);
    for (int round = 0; round < 12; ++round) {
        // Grow a random tree on a builder store: each block picks a random
        // known parent and sometimes carries a wallet payment valid there.
        ChainStore builder(test_params());
        simnet::Wallet miner_wallet(simnet::mix_seed(900, uint64_t(round)));
        simnet::Wallet user_wallet(simnet::mix_seed(901, uint64_t(round)));
        std::vector<Digest> known{builder.genesis_digest()};
        std::vector<Block> blocks;
        const size_t count = 20 + rng.below(30);
        for (size_t i = 0; i < count; ++i) {
            const Digest parent = known[rng.below(known.size())];
            std::vector<Transaction> txs;
            Amount fees = 0;
            if (rng.below(3) == 0) {
                const UtxoSet at_parent = builder.utxo_at(parent);
                if (miner_wallet.balance(at_parent) >= 5) {
                    const Amount fee = Amount(rng.below(2));
                    auto tx = miner_wallet.build_payment(
                        at_parent, user_wallet.fresh_key().public_key, 5 - fee, fee);
                    if (tx) {
                        txs.push_back(*tx);
                        fees = fee;
                    }
                }
            }
            Block b = test::block_on(builder, parent, txs,
                                     miner_wallet.fresh_key().public_key, 1000 + i, fees);
            REQUIRE(builder.apply_block(b).kind != TipUpdate::Kind::Rejected);
            known.push_back(block_digest(b.header));
            blocks.push_back(std::move(b));
        }

        // Deliver the same blocks to a fresh store in a random order, so
        // orphan buffering and reorganizations all get exercised.
        std::vector<Block> order = blocks;
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        ChainStore chain(test_params());
        for (const Block& b : order) {
            const auto tu = chain.apply_block(b);
            REQUIRE(tu.kind != TipUpdate::Kind::Rejected);
        }
        CHECK(chain.orphan_count() == 0);
        CHECK(chain.block_count() == blocks.size() + 1);
        CHECK(chain.tip_height() == builder.tip_height());

        // Incremental maintenance must equal a from-genesis replay, coin by
        // coin, and respect conservation and single-spending.
        CHECK(chain.tip_utxo().digest() == test::replay_utxo(chain).digest());
        CHECK(chain.tip_utxo().total_value() == test::expected_total_value(chain));
        CHECK(chain.tip_utxo().total_value() <=
              Amount(chain.canonical_chain().size()) * chain.params().block_reward);
        CHECK(test::no_double_spend(chain));

        // utxo_at agrees with an independent ancestor-path replay.
        const Digest probe = known[rng.below(known.size())];
        UtxoSet replayed;
        std::vector<Digest> path;
        Digest cur = probe;
        while (true) {
            path.push_back(cur);
            const Block* blk = chain.find_block(cur);
            if (blk->header.height == 0)
                break;
            cur = blk->header.prev_digest;
        }
        std::reverse(path.begin(), path.end());
        for (const Digest& d : path) {
            const Block* blk = chain.find_block(d);
            for (const auto& tx : blk->transactions) {
                for (const auto& in : tx.inputs)
                    replayed.erase(in.source);
                const Digest id = txid(tx);
                for (uint32_t o = 0; o < tx.outputs.size(); ++o)
                    replayed.add({id, o}, tx.outputs[o]);
            }
        }
        CHECK(chain.utxo_at(probe).digest() == replayed.digest());
    }
}

TEST_CASE("fork choice is a pure function of inserts and arrival order") {
    // Build one batch of blocks, apply them to two stores in the same order:
    // identical tips; in a different order: possibly different (tie-break),
    // but deterministic per order.
    ChainStore builder(test_params());
    const auto miner = test::keypair_from(3);
    std::vector<Block> blocks;
    std::vector<Digest> known{builder.genesis_digest()};
    simnet::SimRng rng(77);
    for (uint64_t i = 0; i < 25; ++i) {
        const Digest parent = known[rng.below(known.size())];
        Block b = test::block_on(builder, parent, {}, miner.public_key, i);
        builder.apply_block(b);
        known.push_back(block_digest(b.header));
        blocks.push_back(std::move(b));
    }

    ChainStore s1(test_params()), s2(test_params());
    for (const auto& b : blocks) {
        s1.apply_block(b);
        s2.apply_block(b);
    }
    CHECK(s1.tip() == s2.tip());
    CHECK(s1.canonical_chain() == s2.canonical_chain());
    CHECK(s1.tip_utxo().digest() == s2.tip_utxo().digest());
}

TEST_CASE("burying a tampered byte breaks the hash chain") {
    ChainStore chain(test_params());
    const auto miner = test::keypair_from(1);
    Block b1 = test::block_on(chain, chain.genesis_digest(), {}, miner.public_key, 1);
    REQUIRE(chain.apply_block(b1).kind == TipUpdate::Kind::Extended);
    const Block b2 = test::block_on(chain, chain.tip(), {}, miner.public_key, 2);
    REQUIRE(chain.apply_block(b2).kind == TipUpdate::Kind::Extended);

    const Digest original = block_digest(b1.header);
    REQUIRE(b2.header.prev_digest == original);

    auto bytes = encode_block(b1);
    for (size_t pos = 0; pos < bytes.size(); pos += 11) {
        auto tampered = bytes;
        tampered[pos] ^= 0x01;
        Block mutated;
        try {
            mutated = decode_block(tampered);
        } catch (const ParseError&) {
            continue; // structural damage is detection too
        }
        CHECK(block_digest(mutated.header) != original);
        CHECK(block_digest(mutated.header) != b2.header.prev_digest);
    }
}

TEST_CASE("evicted transactions are reported on reorganization") {
    ChainStore chain(test_params());
    const auto genesis_kp = genesis_keypair();
    const auto miner = test::keypair_from(1);
    const auto somebody = test::keypair_from(2);

    // Payment included on branch A only.
    Transaction pay;
    {
        TxInput in;
        in.source = {txid(chain.genesis().transactions.front()), 0};
        in.spender_key = genesis_kp.public_key;
        pay.inputs.push_back(in);
        pay.outputs.push_back({50, somebody.public_key});
        const auto payload = signing_payload(pay);
        pay.inputs[0].signature = crypto::sign(genesis_kp.private_key, payload);
    }

    const Block a1 = test::block_on(chain, chain.genesis_digest(), {pay}, miner.public_key, 1);
    REQUIRE(chain.apply_block(a1).kind == TipUpdate::Kind::Extended);

    const Block r1 = test::block_on(chain, chain.genesis_digest(), {}, miner.public_key, 2);
    REQUIRE(chain.apply_block(r1).kind == TipUpdate::Kind::Unchanged);
    const Block r2 = test::block_on(chain, block_digest(r1.header), {}, miner.public_key, 3);
    const TipUpdate tu = chain.apply_block(r2);
    REQUIRE(tu.kind == TipUpdate::Kind::Reorganized);
    REQUIRE(tu.evicted.size() == 1);
    CHECK(txid(tu.evicted[0]) == txid(pay));
    CHECK(chain.confirmations(txid(pay)) == 0);
}
