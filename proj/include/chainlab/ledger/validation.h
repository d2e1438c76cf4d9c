// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainlab/ledger/types.h"
#include "chainlab/ledger/utxo.h"

namespace chainlab::ledger {

enum class TxError {
    UnknownOutpoint, // input refers to no known unspent output
    AlreadySpent,    // outpoint consumed earlier in the same tx or block
    BadSignature,
    WrongOwner,    // spender key is not the output's recipient
    ValueOverflow, // amount arithmetic would overflow
    NegativeFee,   // outputs exceed inputs
    BadStructure,  // empty outputs, zero amounts, misplaced coinbase, ...
};

const char* to_string(TxError e);

struct TxCheck {
    std::optional<TxError> error;
    std::string detail;
    Amount fee = 0;
    bool ok() const { return !error.has_value(); }
};

/// Validates a non-coinbase transaction against a UTXO view. Returns the fee
/// on success; on failure names the violated rule.
TxCheck validate_transaction(const Transaction& tx, const UtxoSet& utxo);

enum class BlockError {
    BadProofOfWork,
    BadCommitment,
    BadCoinbase,
    BadHeight,
    BadTransaction, // a contained transaction failed; see tx_index/tx_error
};

const char* to_string(BlockError e);

struct BlockCheck {
    std::optional<BlockError> error;
    std::string detail;
    int tx_index = -1;
    std::optional<TxError> tx_error;
    Amount total_fees = 0;
    // Outputs consumed by the block's transactions, in spend order. Saved by
    // the chain store as undo data for reorganizations.
    std::vector<std::pair<Outpoint, TxOutput>> spent_undo;
    bool ok() const { return !error.has_value(); }
    std::string describe() const;
};

/// Full block validation against the parent's UTXO state: proof of work at
/// the expected difficulty, commitment, coinbase rules (reward plus fees),
/// and sequential transaction validation where earlier transactions in the
/// block can fund later ones.
BlockCheck validate_block(const Block& block, const UtxoSet& parent_utxo,
                          uint32_t expected_difficulty, Amount block_reward);

} // namespace chainlab::ledger
