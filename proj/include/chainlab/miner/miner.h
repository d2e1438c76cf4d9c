// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>

#include "chainlab/miner/mempool.h"

namespace chainlab::miner {

/// A nonce search task: a fixed header template and an inclusive nonce range.
struct MiningJob {
    ledger::BlockHeader header; // nonce field ignored
    uint64_t nonce_first = 0;
    uint64_t nonce_last = UINT64_MAX;
};

struct MiningOutcome {
    std::optional<uint64_t> nonce;
    /// Hashes a sequential scan would evaluate: nonce - first + 1 when found,
    /// else the range size (saturated at 2^64-1 for the full range). Defined
    /// this way so the count is independent of the worker split.
    uint64_t trials = 0;
};

/// Scans the range in ascending order and returns the smallest qualifying
/// nonce, or none. Splitting across W workers over disjoint sub-ranges and
/// merging by minimum yields the identical outcome for any W.
///
/// difficulty_bits must be <= 40; anything higher is not a desk-scale search.
MiningOutcome mine(const MiningJob& job, uint32_t difficulty_bits, unsigned workers = 1);

/// Builds an unmined block (nonce 0) on the given parent: coinbase first,
/// paying exactly reward plus the fees of the included transactions, then
/// pending transactions by descending fee rate (fee per serialized byte, txid
/// ascending on ties), ancestors always before dependents, at most max_txs.
ledger::Block assemble_template(const Mempool& mempool, const Digest& parent_digest,
                                uint64_t parent_height, ledger::Amount reward,
                                uint32_t difficulty_bits, const crypto::PublicKey& coinbase_key,
                                size_t max_txs);

} // namespace chainlab::miner
