// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <queue>

#include "chainlab/ledger/chainstore.h"
#include "chainlab/miner/mempool.h"
#include "chainlab/simnet/config.h"
#include "chainlab/simnet/report.h"
#include "chainlab/simnet/rng.h"
#include "chainlab/simnet/wallet.h"

namespace chainlab::simnet {

struct SimEvent {
    SimTime time = 0;
    uint64_t seq = 0; // insertion order; breaks ties deterministically
    int dest = 0;
    enum class Kind : uint8_t {
        SubmitWorkload = 0,
        TxBroadcast = 1,
        BlockBroadcast = 2,
        MineSuccess = 3,
    };
    Kind kind = Kind::SubmitWorkload;
    ledger::Transaction tx; // TxBroadcast
    ledger::Block block;    // BlockBroadcast; pre-mined block for real-PoW MineSuccess
    bool has_block = false;
    uint64_t generation = 0;    // MineSuccess: dropped when the node re-targeted
    uint64_t mining_trials = 0; // real-PoW MineSuccess: hashes spent
    int workload_index = -1;    // SubmitWorkload
};

struct NodeState {
    int id = 0;
    ledger::ChainStore chain;
    miner::Mempool mempool;
    Wallet wallet;
    uint64_t mine_generation = 0;
    std::vector<int> deferred_workload; // underfunded sends, retried on tip changes

    // Attacker bookkeeping; phase None on honest nodes.
    enum class AttackPhase { None, Honest, Racing, Done };
    AttackPhase phase = AttackPhase::None;
    Digest private_tip;
    uint64_t private_height = 0;
    std::vector<Digest> private_blocks; // withheld, root first
    uint64_t public_best_height = 0;
    bool conflict_in_branch = false;
    std::optional<ledger::Transaction> conflict_tx;

    NodeState(int node_id, const ledger::ChainParams& params, uint64_t wallet_seed);
};

/// Strictly single-threaded discrete-event loop over a network of mining
/// agents. Every node runs the full ledger rules; blocks and transactions
/// flood to all reachable peers under the configured latency; partitions hold
/// cross-side messages until they heal. Mining stops at `duration`, then
/// in-flight deliveries drain so the network can settle. Same config, same
/// report, bit for bit.
class Simulation {
public:
    explicit Simulation(SimConfig config);

    void run();
    /// Processes one event; false when the queue is exhausted.
    bool step();

    const SimConfig& config() const { return config_; }
    SimTime now() const { return now_; }
    NodeState& node(int i) { return *nodes_[size_t(i)]; }
    const NodeState& node(int i) const { return *nodes_[size_t(i)]; }

    size_t queue_size() const { return queue_.size(); }
    uint64_t events_scheduled() const { return next_seq_; }

    /// Test hooks: hand-crafted deliveries.
    void inject_block(int dest, const ledger::Block& block, SimTime at);
    void inject_tx(int dest, const ledger::Transaction& tx, SimTime at);

    /// Collect a human-readable line per processed event (costly; off by
    /// default).
    void enable_trace() { trace_enabled_ = true; }
    const std::string& trace() const { return trace_; }

    /// Finalizes on first call; run() must have drained the queue.
    const SimReport& report();

    /// Canonical chain of the observer node (first honest node) as blocks,
    /// genesis first; what `sim run` writes to disk.
    std::vector<ledger::Block> observer_chain() const;
    int observer_node() const;

private:
    struct MinedRecord {
        Digest digest;
        Digest parent;
        int miner = 0;
    };

    void schedule(SimEvent ev);
    void reschedule_mining(NodeState& node);
    void broadcast_tx(int origin, const ledger::Transaction& tx);
    void broadcast_block(int origin, const ledger::Block& block);
    SimTime delivery_time(int from, int to) const;
    SimTime sample_latency();
    void handle_submit_workload(const SimEvent& ev);
    void handle_tx_broadcast(const SimEvent& ev);
    void handle_block_broadcast(const SimEvent& ev);
    void handle_mine_success(const SimEvent& ev);
    bool attempt_workload(NodeState& node, int index);
    void retry_deferred(NodeState& node);
    void on_tip_change(NodeState& node, const ledger::TipUpdate& tu);
    void update_tx_tracking(NodeState& node);
    void attacker_after_tip_change(NodeState& node);
    void attacker_after_private_mine(NodeState& node, const ledger::Block& block);
    ledger::Block make_raw_block(const crypto::PublicKey& coinbase_key, const Digest& parent,
                                 uint64_t parent_height,
                                 const std::vector<ledger::Transaction>& txs,
                                 ledger::Amount fees, uint64_t nonce) const;
    void log_event(const SimEvent& ev, bool executed);
    void finalize();

    SimConfig config_;
    ledger::ChainParams params_;
    std::vector<double> shares_;
    std::vector<std::unique_ptr<NodeState>> nodes_;

    struct EventOrder {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time)
                return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> queue_;
    uint64_t next_seq_ = 0;
    SimTime now_ = 0;

    SimRng rng_mine_;
    SimRng rng_net_;

    crypto::Sha256 event_log_;
    uint64_t events_processed_ = 0;
    uint64_t invalid_payloads_ = 0;
    uint64_t max_reorg_depth_ = 0;
    std::vector<uint64_t> blocks_mined_;
    std::vector<MinedRecord> mined_;
    std::vector<TxRecord> tx_records_;

    bool attacker_published_ = false;
    std::optional<SimTime> attack_publish_time_;
    uint64_t attacker_private_block_count_ = 0;

    bool trace_enabled_ = false;
    std::string trace_;

    bool finalized_ = false;
    SimReport report_;
};

} // namespace chainlab::simnet
