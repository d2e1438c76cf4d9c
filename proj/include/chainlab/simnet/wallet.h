// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <set>
#include <vector>

#include "chainlab/ledger/utxo.h"

namespace chainlab::simnet {

/// A deterministic key ring plus payment construction. Key seeds derive from
/// (seed_base, key index), so a wallet's n-th key is the same in every run.
class Wallet {
public:
    explicit Wallet(uint64_t seed_base);

    /// Generates and remembers the next key.
    const crypto::KeyPair& fresh_key();

    const std::vector<crypto::KeyPair>& keys() const { return keys_; }
    bool owns(const crypto::PublicKey& pk) const { return owned_.count(pk) > 0; }

    ledger::Amount balance(const ledger::UtxoSet& utxo) const;

    /// Builds a signed payment of `amount` to `to` plus `fee`, spending this
    /// wallet's outputs in `spendable` (typically the mempool overlay view so
    /// unconfirmed change can be chained). Overpayment returns to a fresh
    /// self-owned change output. Returns nothing if funds are insufficient.
    std::optional<ledger::Transaction> build_payment(const ledger::UtxoSet& spendable,
                                                     const crypto::PublicKey& to,
                                                     ledger::Amount amount, ledger::Amount fee);

private:
    uint64_t seed_base_;
    uint64_t next_index_ = 0;
    std::vector<crypto::KeyPair> keys_;
    std::set<crypto::PublicKey> owned_;
};

} // namespace chainlab::simnet
