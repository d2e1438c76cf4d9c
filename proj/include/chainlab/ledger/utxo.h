// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>

#include "chainlab/ledger/types.h"

namespace chainlab::ledger {

/// The set of unspent outputs along one specific chain. Balances are always
/// derived from this set, never stored; the whole set is recomputable by
/// replaying the chain from genesis.
class UtxoSet {
public:
    const TxOutput* lookup(const Outpoint& op) const;
    bool add(const Outpoint& op, const TxOutput& out); // false if already present
    bool erase(const Outpoint& op);                    // false if absent

    size_t size() const { return map_.size(); }
    bool empty() const { return map_.empty(); }

    Amount balance_of(const crypto::PublicKey& key) const;
    Amount total_value() const;

    /// Digest of the canonical serialization (entries in outpoint order).
    /// Two sets are byte-identical iff their digests match.
    Digest digest() const;

    bool operator==(const UtxoSet&) const = default;

    auto begin() const { return map_.begin(); }
    auto end() const { return map_.end(); }

private:
    std::map<Outpoint, TxOutput> map_;
};

} // namespace chainlab::ledger
