// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainlab/ledger/serialize.h"
#include "chainlab/ledger/validation.h"

namespace chainlab::miner {

struct SubmitResult {
    enum class Status { Accepted, Duplicate, Rejected };
    Status status = Status::Rejected;
    std::optional<ledger::TxError> error; // when rejected by validation
    bool conflicts_with_mempool = false;  // outpoint already claimed by a pending tx
    std::string detail;
    ledger::Amount fee = 0;

    bool accepted() const { return status != Status::Rejected; }
};

/// Pending transactions keyed by txid. Every entry validates against the
/// current tip's UTXO set extended by its in-pool ancestors, so chains of
/// unconfirmed transactions are accepted. No two entries consume the same
/// outpoint; the first seen is kept.
class Mempool {
public:
    struct Entry {
        ledger::Transaction tx;
        ledger::Amount fee = 0;
        size_t size = 0;
        uint64_t seq = 0; // admission order
    };

    /// Duplicates are idempotent; conflicts and validation failures are
    /// rejected with the reason.
    SubmitResult submit(const ledger::Transaction& tx, const ledger::UtxoSet& tip_utxo);

    /// Brings the pool in line with a new tip: drops included transactions,
    /// offers evicted ones back, and revalidates everything that remains.
    void sync(const ledger::UtxoSet& tip_utxo, const std::vector<const ledger::Block*>& connected,
              std::vector<ledger::Transaction> evicted);

    /// Tip UTXO extended by all pending transactions, in admission order.
    /// What a wallet should spend against to chain unconfirmed payments.
    ledger::UtxoSet overlay_view(const ledger::UtxoSet& tip_utxo) const;

    bool contains(const Digest& tx_id) const { return entries_.count(tx_id) > 0; }
    size_t size() const { return entries_.size(); }
    const std::map<Digest, Entry>& entries() const { return entries_; }

    /// Entries sorted by admission order.
    std::vector<const Entry*> by_admission() const;

private:
    std::map<Digest, Entry> entries_;
    std::map<ledger::Outpoint, Digest> claimed_; // outpoint -> claiming txid
    uint64_t next_seq_ = 0;
};

} // namespace chainlab::miner
