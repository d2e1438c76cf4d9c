// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/ledger/chainstore.h"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

#include "chainlab/ledger/serialize.h"

namespace chainlab::ledger {

ChainStore::ChainStore(const ChainParams& params) : params_(params) {
    Block genesis = params_.make_genesis();
    const Digest d = block_digest(genesis.header);

    BlockNode node;
    node.parent = Digest{};
    node.height = 0;
    for (const auto& tx : genesis.transactions)
        node.txids.push_back(txid(tx));
    node.block = std::move(genesis);

    for (size_t t = 0; t < node.block.transactions.size(); ++t) {
        tx_locations_[node.txids[t]].push_back(d);
        const auto& tx = node.block.transactions[t];
        for (uint32_t i = 0; i < tx.outputs.size(); ++i)
            tip_utxo_.add({node.txids[t], i}, tx.outputs[i]);
    }

    nodes_.emplace(d, std::move(node));
    canonical_.push_back(d);
    tip_ = d;
    tip_height_ = 0;
}

const Block& ChainStore::genesis() const {
    return nodes_.at(canonical_.front()).block;
}

bool ChainStore::contains(const Digest& block_digest) const {
    return nodes_.count(block_digest) > 0;
}

const Block* ChainStore::find_block(const Digest& d) const {
    auto it = nodes_.find(d);
    return it == nodes_.end() ? nullptr : &it->second.block;
}

std::optional<uint64_t> ChainStore::height_of(const Digest& d) const {
    auto it = nodes_.find(d);
    if (it == nodes_.end())
        return std::nullopt;
    return it->second.height;
}

bool ChainStore::on_canonical_chain(const Digest& d) const {
    auto it = nodes_.find(d);
    if (it == nodes_.end())
        return false;
    uint64_t h = it->second.height;
    return h < canonical_.size() && canonical_[h] == d;
}

const ChainStore::BlockNode& ChainStore::node_at(const Digest& d) const {
    auto it = nodes_.find(d);
    if (it == nodes_.end())
        throw std::out_of_range("unknown block " + d.hex());
    return it->second;
}

void ChainStore::apply_forward(const BlockNode& node, UtxoSet& utxo) const {
    for (size_t t = 0; t < node.block.transactions.size(); ++t) {
        const Transaction& tx = node.block.transactions[t];
        for (const auto& in : tx.inputs)
            utxo.erase(in.source);
        for (uint32_t i = 0; i < tx.outputs.size(); ++i)
            utxo.add({node.txids[t], i}, tx.outputs[i]);
    }
}

void ChainStore::rollback(const BlockNode& node, UtxoSet& utxo) const {
    for (size_t t = 0; t < node.block.transactions.size(); ++t) {
        const Transaction& tx = node.block.transactions[t];
        for (uint32_t i = 0; i < tx.outputs.size(); ++i)
            utxo.erase({node.txids[t], i});
    }
    for (const auto& [op, out] : node.spent_undo)
        utxo.add(op, out);
}

// Digests on the path ancestor -> descendant, excluding ancestor, lowest
// height first.
std::vector<Digest> ChainStore::path_from_to(uint64_t, const Digest& descendant,
                                             const Digest& ancestor) const {
    std::vector<Digest> path;
    Digest cur = descendant;
    while (cur != ancestor) {
        path.push_back(cur);
        cur = node_at(cur).parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

UtxoSet ChainStore::utxo_at(const Digest& target) const {
    const BlockNode* t = &node_at(target);

    // Find the lowest common ancestor of tip and target.
    Digest a = tip_;
    uint64_t ah = tip_height_;
    Digest b = target;
    uint64_t bh = t->height;
    while (ah > bh) {
        a = node_at(a).parent;
        --ah;
    }
    while (bh > ah) {
        b = node_at(b).parent;
        --bh;
    }
    while (a != b) {
        a = node_at(a).parent;
        b = node_at(b).parent;
    }
    const Digest lca = a;

    UtxoSet utxo = tip_utxo_;
    Digest cur = tip_;
    while (cur != lca) {
        const BlockNode& n = node_at(cur);
        rollback(n, utxo);
        cur = n.parent;
    }
    for (const Digest& d : path_from_to(0, target, lca))
        apply_forward(node_at(d), utxo);
    return utxo;
}

uint32_t ChainStore::confirmations(const Digest& tx_id) const {
    auto block = canonical_block_of_tx(tx_id);
    if (!block)
        return 0;
    return static_cast<uint32_t>(tip_height_ - node_at(*block).height + 1);
}

std::optional<Digest> ChainStore::canonical_block_of_tx(const Digest& tx_id) const {
    auto it = tx_locations_.find(tx_id);
    if (it == tx_locations_.end())
        return std::nullopt;
    for (const Digest& d : it->second)
        if (on_canonical_chain(d))
            return d;
    return std::nullopt;
}

TipUpdate ChainStore::apply_block(const Block& block) {
    TipUpdate tu;
    tu.kind = apply_one(block, tu);
    if (tu.kind != TipUpdate::Kind::Rejected && tu.kind != TipUpdate::Kind::Orphaned &&
        tu.kind != TipUpdate::Kind::Duplicate)
        connect_orphans(block_digest(block.header), tu);
    return tu;
}

TipUpdate::Kind ChainStore::apply_one(const Block& block, TipUpdate& tu) {
    const Digest d = block_digest(block.header);
    if (nodes_.count(d))
        return TipUpdate::Kind::Duplicate;

    auto parent_it = nodes_.find(block.header.prev_digest);
    if (parent_it == nodes_.end()) {
        // Buffer out-of-order blocks until the parent shows up.
        bool already_buffered = false;
        for (const auto& [p, digest] : orphan_order_)
            if (digest == d)
                already_buffered = true;
        if (!already_buffered) {
            if (orphan_order_.size() >= kMaxOrphans) {
                auto [old_parent, old_digest] = orphan_order_.front();
                orphan_order_.pop_front();
                auto& vec = orphans_[old_parent];
                std::erase_if(vec, [&](const Block& b) { return block_digest(b.header) == old_digest; });
                if (vec.empty())
                    orphans_.erase(old_parent);
            }
            orphans_[block.header.prev_digest].push_back(block);
            orphan_order_.emplace_back(block.header.prev_digest, d);
        }
        return TipUpdate::Kind::Orphaned;
    }

    const BlockNode& parent = parent_it->second;
    if (block.header.height != parent.height + 1) {
        tu.rejection = BlockCheck();
        tu.rejection.error = BlockError::BadHeight;
        tu.rejection.detail = "height " + std::to_string(block.header.height) + " after parent at " +
                              std::to_string(parent.height);
        return TipUpdate::Kind::Rejected;
    }

    const Digest parent_digest = block.header.prev_digest;
    UtxoSet parent_utxo = utxo_at(parent_digest);
    BlockCheck check =
        validate_block(block, parent_utxo, params_.difficulty_bits, params_.block_reward);
    if (!check.ok()) {
        tu.rejection = std::move(check);
        return TipUpdate::Kind::Rejected;
    }

    BlockNode node;
    node.block = block;
    node.parent = parent_digest;
    node.height = block.header.height;
    node.spent_undo = std::move(check.spent_undo);
    for (const auto& tx : block.transactions)
        node.txids.push_back(txid(tx));
    for (const Digest& id : node.txids)
        tx_locations_[id].push_back(d);
    const uint64_t new_height = node.height;
    nodes_.emplace(d, std::move(node));

    if (new_height <= tip_height_)
        return TipUpdate::Kind::Unchanged; // first-seen tie-break keeps the incumbent

    if (parent_digest == tip_) {
        apply_forward(node_at(d), tip_utxo_);
        tip_ = d;
        tip_height_ = new_height;
        canonical_.push_back(d);
        tu.connected_blocks.push_back(d);
        tu.applied = std::max(tu.applied, size_t{1});
        return TipUpdate::Kind::Extended;
    }

    reorg_to(d, tu);
    return TipUpdate::Kind::Reorganized;
}

void ChainStore::reorg_to(const Digest& new_tip, TipUpdate& tu) {
    // Lowest common ancestor of the old and new tips.
    Digest a = tip_;
    Digest b = new_tip;
    uint64_t ah = tip_height_;
    uint64_t bh = node_at(new_tip).height;
    while (ah > bh) {
        a = node_at(a).parent;
        --ah;
    }
    while (bh > ah) {
        b = node_at(b).parent;
        --bh;
    }
    while (a != b) {
        a = node_at(a).parent;
        b = node_at(b).parent;
    }
    const Digest lca = a;
    const uint64_t lca_height = node_at(lca).height;

    // Roll the UTXO set back to the fork point, collecting displaced txs.
    std::vector<Transaction> displaced;
    Digest cur = tip_;
    size_t rolled = 0;
    while (cur != lca) {
        const BlockNode& n = node_at(cur);
        rollback(n, tip_utxo_);
        for (size_t t = 1; t < n.block.transactions.size(); ++t)
            displaced.push_back(n.block.transactions[t]);
        cur = n.parent;
        ++rolled;
    }

    // Replay the new branch.
    std::vector<Digest> forward = path_from_to(0, new_tip, lca);
    std::set<Digest> reapplied;
    for (const Digest& d : forward) {
        const BlockNode& n = node_at(d);
        apply_forward(n, tip_utxo_);
        for (const Digest& id : n.txids)
            reapplied.insert(id);
        tu.connected_blocks.push_back(d);
    }

    canonical_.resize(lca_height + 1);
    canonical_.insert(canonical_.end(), forward.begin(), forward.end());
    tip_ = new_tip;
    tip_height_ = node_at(new_tip).height;

    for (auto& tx : displaced)
        if (!reapplied.count(txid(tx)))
            tu.evicted.push_back(std::move(tx));

    tu.rolled_back = std::max(tu.rolled_back, rolled);
    tu.applied = std::max(tu.applied, forward.size());
}

void ChainStore::connect_orphans(const Digest& parent, TipUpdate& tu) {
    std::vector<Digest> ready{parent};
    while (!ready.empty()) {
        Digest p = ready.back();
        ready.pop_back();
        auto it = orphans_.find(p);
        if (it == orphans_.end())
            continue;
        std::vector<Block> children = std::move(it->second);
        orphans_.erase(it);
        std::erase_if(orphan_order_, [&](const auto& e) { return e.first == p; });
        for (const Block& child : children) {
            TipUpdate::Kind kind = apply_one(child, tu);
            if (kind == TipUpdate::Kind::Rejected || kind == TipUpdate::Kind::Duplicate)
                continue;
            ++tu.connected_orphans;
            if (kind == TipUpdate::Kind::Reorganized)
                tu.kind = TipUpdate::Kind::Reorganized;
            else if (kind == TipUpdate::Kind::Extended && tu.kind != TipUpdate::Kind::Reorganized)
                tu.kind = TipUpdate::Kind::Extended;
            ready.push_back(block_digest(child.header));
        }
    }
}

} // namespace chainlab::ledger
