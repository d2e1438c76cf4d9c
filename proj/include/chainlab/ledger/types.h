// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "chainlab/crypto/keys.h"
#include "chainlab/crypto/sha256.h"

namespace chainlab::ledger {

/// Coin amounts are integer counts of the smallest indivisible unit.
using Amount = int64_t;

struct TxOutput {
    Amount amount = 0;
    crypto::PublicKey recipient;
    bool operator==(const TxOutput&) const = default;
};

struct Outpoint {
    Digest txid;
    uint32_t index = 0;
    auto operator<=>(const Outpoint&) const = default;
};

struct TxInput {
    Outpoint source;
    crypto::PublicKey spender_key;
    crypto::Signature signature; // over the spending transaction's signing payload
    bool operator==(const TxInput&) const = default;
};

struct Transaction {
    // Block height for coinbase transactions, 0 otherwise. Serialized so that
    // coinbases at different heights get distinct txids; without it two
    // coinbase-only blocks paying the same key would collide in the UTXO map.
    uint64_t coinbase_height = 0;
    std::vector<TxInput> inputs; // empty iff coinbase
    std::vector<TxOutput> outputs;

    bool is_coinbase() const { return inputs.empty(); }
    bool operator==(const Transaction&) const = default;
};

struct BlockHeader {
    Digest prev_digest;
    Digest tx_commitment; // sha256 of the concatenated txids, in order
    uint64_t nonce = 0;
    uint32_t difficulty_bits = 0;
    uint64_t height = 0;
    bool operator==(const BlockHeader&) const = default;
};

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions; // first is the coinbase
    bool operator==(const Block&) const = default;
};

} // namespace chainlab::ledger
