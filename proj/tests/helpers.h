// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "chainlab/ledger/chainstore.h"
#include "chainlab/ledger/serialize.h"
#include "chainlab/simnet/rng.h"
#include "chainlab/simnet/wallet.h"

namespace chainlab::test {

inline crypto::KeyPair keypair_from(uint64_t n) {
    std::array<uint8_t, 32> seed{};
    for (int w = 0; w < 4; ++w) {
        const uint64_t v = simnet::mix_seed(n, uint64_t(w));
        for (int b = 0; b < 8; ++b)
            seed[size_t(w * 8 + b)] = uint8_t(v >> (56 - 8 * b));
    }
    return crypto::generate_keypair(std::span<const uint8_t, 32>(seed));
}

/// A valid block on the given parent at difficulty 0. `salt` keeps otherwise
/// identical headers distinct.
inline ledger::Block block_on(const ledger::ChainStore& chain, const Digest& parent,
                              const std::vector<ledger::Transaction>& txs,
                              const crypto::PublicKey& coinbase_key, uint64_t salt,
                              ledger::Amount fees = 0) {
    const uint64_t parent_height = *chain.height_of(parent);
    ledger::Block b;
    ledger::Transaction coinbase;
    coinbase.coinbase_height = parent_height + 1;
    coinbase.outputs.push_back({chain.params().block_reward + fees, coinbase_key});
    b.transactions.push_back(std::move(coinbase));
    for (const auto& tx : txs)
        b.transactions.push_back(tx);
    b.header.prev_digest = parent;
    b.header.tx_commitment = ledger::tx_commitment(b.transactions);
    b.header.nonce = salt;
    b.header.difficulty_bits = chain.params().difficulty_bits;
    b.header.height = parent_height + 1;
    return b;
}

/// Independent replay oracle: rebuilds the UTXO set from scratch along the
/// canonical chain, without touching the incremental bookkeeping under test.
inline ledger::UtxoSet replay_utxo(const ledger::ChainStore& chain) {
    ledger::UtxoSet utxo;
    for (const Digest& d : chain.canonical_chain()) {
        const ledger::Block* b = chain.find_block(d);
        for (const auto& tx : b->transactions) {
            for (const auto& in : tx.inputs)
                utxo.erase(in.source);
            const Digest id = ledger::txid(tx);
            for (uint32_t i = 0; i < tx.outputs.size(); ++i)
                utxo.add({id, i}, tx.outputs[i]);
        }
    }
    return utxo;
}

/// Exhaustive double-spend scan over the canonical chain: every outpoint
/// consumed at most once.
inline bool no_double_spend(const ledger::ChainStore& chain) {
    std::set<ledger::Outpoint> consumed;
    for (const Digest& d : chain.canonical_chain()) {
        const ledger::Block* b = chain.find_block(d);
        for (const auto& tx : b->transactions)
            for (const auto& in : tx.inputs)
                if (!consumed.insert(in.source).second)
                    return false;
    }
    return true;
}

/// Conservation oracle: expected total UTXO value, computed independently as
/// sum over canonical blocks of (coinbase claim - fees paid in the block).
/// Equals block_reward * blocks when every miner claims the full allowance.
inline ledger::Amount expected_total_value(const ledger::ChainStore& chain) {
    ledger::UtxoSet utxo;
    ledger::Amount total = 0;
    for (const Digest& d : chain.canonical_chain()) {
        const ledger::Block* b = chain.find_block(d);
        for (const auto& tx : b->transactions) {
            ledger::Amount in_value = 0;
            for (const auto& in : tx.inputs) {
                in_value += utxo.lookup(in.source)->amount;
                utxo.erase(in.source);
            }
            ledger::Amount out_value = 0;
            const Digest id = ledger::txid(tx);
            for (uint32_t i = 0; i < tx.outputs.size(); ++i) {
                out_value += tx.outputs[i].amount;
                utxo.add({id, i}, tx.outputs[i]);
            }
            if (tx.is_coinbase())
                total += out_value; // minted
            else
                total -= in_value - out_value; // fee leaves the set
        }
    }
    return total;
}

} // namespace chainlab::test
