// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/ledger/params.h"

#include "chainlab/ledger/serialize.h"

namespace chainlab::ledger {

crypto::KeyPair genesis_keypair() {
    const Digest seed = crypto::sha256(std::string_view("chainlab/genesis-key/v1"));
    return crypto::generate_keypair(std::span<const uint8_t, 32>(seed.bytes));
}

Block ChainParams::make_genesis() const {
    Block genesis;
    Transaction coinbase;
    coinbase.coinbase_height = 0;
    coinbase.outputs.push_back({block_reward, genesis_keypair().public_key});
    genesis.transactions.push_back(std::move(coinbase));
    genesis.header.prev_digest = Digest{}; // all zero: no parent
    genesis.header.tx_commitment = tx_commitment(genesis.transactions);
    genesis.header.nonce = 0;
    genesis.header.difficulty_bits = 0; // exempt from proof of work
    genesis.header.height = 0;
    return genesis;
}

} // namespace chainlab::ledger
