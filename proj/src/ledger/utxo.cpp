// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/ledger/utxo.h"

#include "chainlab/ledger/serialize.h"

namespace chainlab::ledger {

const TxOutput* UtxoSet::lookup(const Outpoint& op) const {
    auto it = map_.find(op);
    return it == map_.end() ? nullptr : &it->second;
}

bool UtxoSet::add(const Outpoint& op, const TxOutput& out) {
    return map_.emplace(op, out).second;
}

bool UtxoSet::erase(const Outpoint& op) {
    return map_.erase(op) > 0;
}

Amount UtxoSet::balance_of(const crypto::PublicKey& key) const {
    Amount sum = 0;
    for (const auto& [op, out] : map_)
        if (out.recipient == key)
            sum += out.amount;
    return sum;
}

Amount UtxoSet::total_value() const {
    Amount sum = 0;
    for (const auto& [op, out] : map_)
        sum += out.amount;
    return sum;
}

Digest UtxoSet::digest() const {
    ByteWriter w;
    w.u64be(map_.size());
    for (const auto& [op, out] : map_) {
        w.raw(op.txid.bytes);
        w.u32be(op.index);
        w.u64be(static_cast<uint64_t>(out.amount));
        w.raw(out.recipient.bytes);
    }
    return crypto::sha256(w.data());
}

} // namespace chainlab::ledger
