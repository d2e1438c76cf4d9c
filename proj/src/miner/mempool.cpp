// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/miner/mempool.h"

#include <algorithm>
#include <set>

namespace chainlab::miner {

using namespace ledger;

std::vector<const Mempool::Entry*> Mempool::by_admission() const {
    std::vector<const Entry*> out;
    out.reserve(entries_.size());
    for (const auto& [id, e] : entries_)
        out.push_back(&e);
    std::sort(out.begin(), out.end(), [](const Entry* a, const Entry* b) { return a->seq < b->seq; });
    return out;
}

UtxoSet Mempool::overlay_view(const UtxoSet& tip_utxo) const {
    UtxoSet view = tip_utxo;
    for (const Entry* e : by_admission()) {
        for (const auto& in : e->tx.inputs)
            view.erase(in.source);
        const Digest id = txid(e->tx);
        for (uint32_t i = 0; i < e->tx.outputs.size(); ++i)
            view.add({id, i}, e->tx.outputs[i]);
    }
    return view;
}

SubmitResult Mempool::submit(const Transaction& tx, const UtxoSet& tip_utxo) {
    SubmitResult res;
    const Digest id = txid(tx);
    if (entries_.count(id)) {
        res.status = SubmitResult::Status::Duplicate;
        res.fee = entries_.at(id).fee;
        return res;
    }

    for (const auto& in : tx.inputs) {
        auto it = claimed_.find(in.source);
        if (it != claimed_.end()) {
            res.status = SubmitResult::Status::Rejected;
            res.conflicts_with_mempool = true;
            res.detail = "outpoint " + in.source.txid.hex() + ":" +
                         std::to_string(in.source.index) + " already claimed by " +
                         it->second.hex();
            return res;
        }
    }

    TxCheck check = validate_transaction(tx, overlay_view(tip_utxo));
    if (!check.ok()) {
        res.status = SubmitResult::Status::Rejected;
        res.error = check.error;
        res.detail = check.detail;
        return res;
    }

    Entry e;
    e.tx = tx;
    e.fee = check.fee;
    e.size = serialized_size(tx);
    e.seq = next_seq_++;
    for (const auto& in : tx.inputs)
        claimed_[in.source] = id;
    entries_.emplace(id, std::move(e));

    res.status = SubmitResult::Status::Accepted;
    res.fee = check.fee;
    return res;
}

void Mempool::sync(const UtxoSet& tip_utxo, const std::vector<const Block*>& connected,
                   std::vector<Transaction> evicted) {
    std::set<Digest> included;
    for (const Block* b : connected)
        for (const auto& tx : b->transactions)
            included.insert(txid(tx));

    // Candidates keep their original admission order; evicted txs rejoin at
    // the back.
    std::vector<Transaction> candidates;
    for (const Entry* e : by_admission())
        candidates.push_back(e->tx);
    for (auto& tx : evicted)
        candidates.push_back(std::move(tx));

    entries_.clear();
    claimed_.clear();

    UtxoSet view = tip_utxo;
    for (auto& tx : candidates) {
        const Digest id = txid(tx);
        if (included.count(id) || entries_.count(id))
            continue;
        bool conflict = false;
        for (const auto& in : tx.inputs)
            if (claimed_.count(in.source)) {
                conflict = true;
                break;
            }
        if (conflict)
            continue;
        TxCheck check = validate_transaction(tx, view);
        if (!check.ok())
            continue;

        for (const auto& in : tx.inputs) {
            claimed_[in.source] = id;
            view.erase(in.source);
        }
        for (uint32_t i = 0; i < tx.outputs.size(); ++i)
            view.add({id, i}, tx.outputs[i]);

        Entry e;
        e.fee = check.fee;
        e.size = serialized_size(tx);
        e.seq = next_seq_++;
        e.tx = std::move(tx);
        entries_.emplace(id, std::move(e));
    }
}

} // namespace chainlab::miner
