// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "chainlab/ledger/params.h"
#include "chainlab/ledger/validation.h"

namespace chainlab::ledger {

struct TipUpdate {
    enum class Kind {
        Rejected,    // failed validation, not stored
        Duplicate,   // already known, no-op
        Orphaned,    // parent unknown, buffered
        Unchanged,   // stored on a side branch, tip kept (first-seen tie-break)
        Extended,    // tip advanced along the current branch
        Reorganized, // tip switched branches
    };
    Kind kind = Kind::Unchanged;
    BlockCheck rejection; // when Rejected
    size_t rolled_back = 0;
    size_t applied = 0;
    int connected_orphans = 0;
    // Blocks that became canonical during this call, lowest height first.
    std::vector<Digest> connected_blocks;
    // Transactions rolled off the chain and not re-included by the new
    // branch; candidates to return to the mempool.
    std::vector<Transaction> evicted;

    bool tip_changed() const { return kind == Kind::Extended || kind == Kind::Reorganized; }
};

/// Tree of validated blocks with longest-chain fork choice. The tip is a
/// deepest leaf; on equal depth the incumbent wins (first seen). The UTXO set
/// at the tip is maintained incrementally, with per-block undo data for
/// rollbacks, and is always equal to a full replay from genesis.
///
/// Single writer, concurrent readers by snapshot: all returned values are
/// copies or point into immutable block data.
class ChainStore {
public:
    explicit ChainStore(const ChainParams& params);

    /// Validates against the parent state, stores the block and re-selects
    /// the tip. Unknown parents are buffered (bounded pool) and connected
    /// when the parent arrives; duplicates are no-ops.
    TipUpdate apply_block(const Block& block);

    const ChainParams& params() const { return params_; }
    const Block& genesis() const;
    Digest genesis_digest() const { return canonical_.front(); }

    Digest tip() const { return tip_; }
    uint64_t tip_height() const { return tip_height_; }
    const UtxoSet& tip_utxo() const { return tip_utxo_; }

    bool contains(const Digest& block_digest) const;
    const Block* find_block(const Digest& block_digest) const;
    std::optional<uint64_t> height_of(const Digest& block_digest) const;
    bool on_canonical_chain(const Digest& block_digest) const;

    /// Reconstructs the UTXO set as of an arbitrary stored block.
    UtxoSet utxo_at(const Digest& block_digest) const;

    /// Confirmation depth of a transaction: 1 if in the tip block, k if k-1
    /// blocks below the tip, 0 if not on the canonical chain at all.
    uint32_t confirmations(const Digest& tx_id) const;

    /// Canonical block containing the transaction, if any.
    std::optional<Digest> canonical_block_of_tx(const Digest& tx_id) const;

    /// Digests from genesis to tip, indexed by height.
    const std::vector<Digest>& canonical_chain() const { return canonical_; }

    size_t block_count() const { return nodes_.size(); }
    size_t orphan_count() const { return orphan_order_.size(); }

    static constexpr size_t kMaxOrphans = 1024;

private:
    struct BlockNode {
        Block block;
        Digest parent;
        uint64_t height = 0;
        std::vector<std::pair<Outpoint, TxOutput>> spent_undo;
        std::vector<Digest> txids; // cached, same order as transactions
    };

    TipUpdate::Kind apply_one(const Block& block, TipUpdate& tu);
    void connect_orphans(const Digest& parent, TipUpdate& tu);
    void apply_forward(const BlockNode& node, UtxoSet& utxo) const;
    void rollback(const BlockNode& node, UtxoSet& utxo) const;
    void reorg_to(const Digest& new_tip, TipUpdate& tu);
    const BlockNode& node_at(const Digest& d) const;
    std::vector<Digest> path_from_to(uint64_t from_height, const Digest& descendant,
                                     const Digest& ancestor) const;

    ChainParams params_;
    std::map<Digest, BlockNode> nodes_;
    std::map<Digest, std::vector<Digest>> tx_locations_; // txid -> containing blocks
    std::vector<Digest> canonical_;
    Digest tip_;
    uint64_t tip_height_ = 0;
    UtxoSet tip_utxo_;

    std::map<Digest, std::vector<Block>> orphans_; // keyed by missing parent
    std::deque<std::pair<Digest, Digest>> orphan_order_; // (parent, digest), oldest first
};

} // namespace chainlab::ledger
