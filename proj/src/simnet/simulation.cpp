// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/simnet/simulation.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "chainlab/ledger/serialize.h"
#include "chainlab/miner/miner.h"

namespace chainlab::simnet {

using namespace ledger;

NodeState::NodeState(int node_id, const ChainParams& params, uint64_t wallet_seed)
    : id(node_id), chain(params), wallet(wallet_seed) {}

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      rng_mine_(mix_seed(config_.seed, 1)),
      rng_net_(mix_seed(config_.seed, 2)) {
    config_.validate();

    params_.block_reward = config_.block_reward;
    // Poisson mode abstracts the nonce grind into exponential arrivals, so
    // blocks carry difficulty 0 and any nonce qualifies.
    params_.difficulty_bits =
        config_.mining_mode == MiningMode::RealPow ? config_.difficulty_bits : 0;
    shares_ = config_.effective_shares();

    for (int i = 0; i < config_.node_count; ++i)
        nodes_.push_back(std::make_unique<NodeState>(i, params_, mix_seed(config_.seed, 0x1000 + uint64_t(i))));
    blocks_mined_.assign(size_t(config_.node_count), 0);

    if (config_.attack.enabled)
        nodes_[size_t(config_.attack.attacker_node)]->phase = NodeState::AttackPhase::Honest;

    // Recipient keys are drawn up front, in workload order, so key indices do
    // not depend on the submission schedule.
    for (size_t i = 0; i < config_.workload.size(); ++i) {
        const WorkloadTx& w = config_.workload[i];
        TxRecord rec;
        rec.workload_index = int(i);
        rec.from_node = w.from_node;
        rec.to_node = w.to_node;
        rec.amount = w.amount;
        rec.recipient = nodes_[size_t(w.to_node)]->wallet.fresh_key().public_key;
        tx_records_.push_back(rec);

        SimEvent ev;
        ev.time = w.time;
        ev.dest = w.from_node;
        ev.kind = SimEvent::Kind::SubmitWorkload;
        ev.workload_index = int(i);
        schedule(std::move(ev));
    }

    for (auto& n : nodes_)
        reschedule_mining(*n);
}

void Simulation::schedule(SimEvent ev) {
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
}

SimTime Simulation::sample_latency() {
    if (config_.latency.kind == LatencyModel::Kind::Fixed)
        return config_.latency.fixed;
    const uint64_t span = uint64_t(config_.latency.max - config_.latency.min) + 1;
    return config_.latency.min + SimTime(rng_net_.below(span));
}

SimTime Simulation::delivery_time(int from, int to) const {
    // Cross-partition messages are held at the boundary and released at heal.
    SimTime send = now_;
    bool moved = true;
    while (moved) {
        moved = false;
        for (const auto& p : config_.partitions) {
            if (send < p.start || send >= p.end)
                continue;
            const bool from_a = std::count(p.side_a.begin(), p.side_a.end(), from) > 0;
            const bool from_b = std::count(p.side_b.begin(), p.side_b.end(), from) > 0;
            const bool to_a = std::count(p.side_a.begin(), p.side_a.end(), to) > 0;
            const bool to_b = std::count(p.side_b.begin(), p.side_b.end(), to) > 0;
            if ((from_a && to_b) || (from_b && to_a)) {
                send = p.end;
                moved = true;
            }
        }
    }
    return send;
}

void Simulation::broadcast_tx(int origin, const Transaction& tx) {
    for (int dest = 0; dest < config_.node_count; ++dest) {
        if (dest == origin)
            continue;
        SimEvent ev;
        ev.time = delivery_time(origin, dest) + sample_latency();
        ev.dest = dest;
        ev.kind = SimEvent::Kind::TxBroadcast;
        ev.tx = tx;
        schedule(std::move(ev));
    }
}

void Simulation::broadcast_block(int origin, const Block& block) {
    for (int dest = 0; dest < config_.node_count; ++dest) {
        if (dest == origin)
            continue;
        SimEvent ev;
        ev.time = delivery_time(origin, dest) + sample_latency();
        ev.dest = dest;
        ev.kind = SimEvent::Kind::BlockBroadcast;
        ev.block = block;
        schedule(std::move(ev));
    }
}

Block Simulation::make_raw_block(const crypto::PublicKey& coinbase_key, const Digest& parent,
                                 uint64_t parent_height, const std::vector<Transaction>& txs,
                                 Amount fees, uint64_t nonce) const {
    Block b;
    Transaction coinbase;
    coinbase.coinbase_height = parent_height + 1;
    coinbase.outputs.push_back({params_.block_reward + fees, coinbase_key});
    b.transactions.push_back(std::move(coinbase));
    for (const auto& tx : txs)
        b.transactions.push_back(tx);
    b.header.prev_digest = parent;
    b.header.tx_commitment = tx_commitment(b.transactions);
    b.header.nonce = nonce;
    b.header.difficulty_bits = params_.difficulty_bits;
    b.header.height = parent_height + 1;
    return b;
}

void Simulation::reschedule_mining(NodeState& node) {
    ++node.mine_generation;
    const double share = shares_[size_t(node.id)];
    if (share <= 0.0)
        return;

    SimEvent ev;
    ev.dest = node.id;
    ev.kind = SimEvent::Kind::MineSuccess;
    ev.generation = node.mine_generation;

    if (config_.mining_mode == MiningMode::Poisson) {
        const double dt = rng_mine_.exponential(double(config_.mean_block_interval) / share);
        ev.time = now_ + std::max<SimTime>(1, SimTime(std::llround(dt)));
        schedule(std::move(ev));
        return;
    }

    // Real proof of work: grind the nonce now, then map the spent trials onto
    // simulated time through this node's share of the network hash rate.
    const bool racing = node.phase == NodeState::AttackPhase::Racing;
    Block block;
    if (racing) {
        std::vector<Transaction> txs;
        if (!node.conflict_in_branch && node.conflict_tx)
            txs.push_back(*node.conflict_tx);
        block = make_raw_block(node.wallet.fresh_key().public_key, node.private_tip,
                               node.private_height, txs, 0, 0);
    } else {
        const crypto::PublicKey coinbase_key = node.wallet.fresh_key().public_key;
        block = miner::assemble_template(node.mempool, node.chain.tip(), node.chain.tip_height(),
                                         params_.block_reward, params_.difficulty_bits,
                                         coinbase_key, config_.max_txs_per_block);
    }

    miner::MiningJob job;
    job.header = block.header;
    const miner::MiningOutcome outcome =
        miner::mine(job, params_.difficulty_bits, config_.mine_workers);
    if (!outcome.nonce)
        return; // full range exhausted; give up on this template
    block.header.nonce = *outcome.nonce;

    const double network_rate =
        std::exp2(double(params_.difficulty_bits)) / double(config_.mean_block_interval);
    const double dt = double(outcome.trials) / (network_rate * share);
    ev.time = now_ + std::max<SimTime>(1, SimTime(std::llround(dt)));
    ev.block = std::move(block);
    ev.has_block = true;
    ev.mining_trials = outcome.trials;
    schedule(std::move(ev));
}

bool Simulation::attempt_workload(NodeState& node, int index) {
    TxRecord& rec = tx_records_[size_t(index)];
    const WorkloadTx& w = config_.workload[size_t(index)];
    const UtxoSet view = node.mempool.overlay_view(node.chain.tip_utxo());
    auto tx = node.wallet.build_payment(view, rec.recipient, w.amount, w.fee);
    if (!tx)
        return false;
    auto res = node.mempool.submit(*tx, node.chain.tip_utxo());
    if (!res.accepted()) {
        ++invalid_payloads_;
        return true; // consumed (dropped), do not retry
    }
    rec.built = true;
    rec.tx_id = txid(*tx);
    rec.submit_time = now_;
    broadcast_tx(node.id, *tx);
    return true;
}

void Simulation::retry_deferred(NodeState& node) {
    std::vector<int> still;
    for (int idx : node.deferred_workload)
        if (!attempt_workload(node, idx))
            still.push_back(idx);
    node.deferred_workload = std::move(still);
}

void Simulation::handle_submit_workload(const SimEvent& ev) {
    NodeState& node = *nodes_[size_t(ev.dest)];
    if (!attempt_workload(node, ev.workload_index))
        node.deferred_workload.push_back(ev.workload_index);
}

void Simulation::handle_tx_broadcast(const SimEvent& ev) {
    NodeState& node = *nodes_[size_t(ev.dest)];
    const Digest id = txid(ev.tx);
    if (node.chain.canonical_block_of_tx(id))
        return; // already confirmed here
    auto res = node.mempool.submit(ev.tx, node.chain.tip_utxo());
    if (res.status == miner::SubmitResult::Status::Rejected)
        ++invalid_payloads_;
    else if (res.status == miner::SubmitResult::Status::Accepted)
        retry_deferred(node);
}

void Simulation::handle_block_broadcast(const SimEvent& ev) {
    NodeState& node = *nodes_[size_t(ev.dest)];
    if (node.phase != NodeState::AttackPhase::None)
        node.public_best_height = std::max(node.public_best_height, ev.block.header.height);
    TipUpdate tu = node.chain.apply_block(ev.block);
    if (tu.kind == TipUpdate::Kind::Rejected) {
        ++invalid_payloads_;
        return;
    }
    if (tu.tip_changed())
        on_tip_change(node, tu);
}

void Simulation::update_tx_tracking(NodeState& node) {
    for (auto& rec : tx_records_) {
        if (!rec.built || rec.to_node != node.id)
            continue;
        const uint32_t depth = node.chain.confirmations(rec.tx_id);
        rec.max_depth = std::max(rec.max_depth, depth);
        if (depth >= 1 && !rec.depth1_time)
            rec.depth1_time = now_;
        if (depth >= 6 && !rec.depth6_time)
            rec.depth6_time = now_;
    }
}

void Simulation::attacker_after_tip_change(NodeState& node) {
    if (node.phase != NodeState::AttackPhase::Honest)
        return;
    const TxRecord& target = tx_records_[size_t(config_.attack.target_tx)];
    if (!target.built || node.chain.confirmations(target.tx_id) < 1)
        return;

    // The target payment just landed in a public block: fork below that block
    // and seed the private branch with a conflicting re-spend to ourselves.
    const auto container = node.chain.canonical_block_of_tx(target.tx_id);
    const Block* container_block = node.chain.find_block(*container);
    const Digest fork_parent = container_block->header.prev_digest;

    const Transaction* target_tx = nullptr;
    for (const auto& tx : container_block->transactions)
        if (txid(tx) == target.tx_id)
            target_tx = &tx;

    const UtxoSet fork_utxo = node.chain.utxo_at(fork_parent);
    Transaction conflict;
    Amount total_in = 0;
    for (const auto& in : target_tx->inputs) {
        const TxOutput* out = fork_utxo.lookup(in.source);
        if (!out)
            return; // inputs not visible at the fork point; abandon the attack
        total_in += out->amount;
        TxInput ci;
        ci.source = in.source;
        ci.spender_key = in.spender_key;
        conflict.inputs.push_back(ci);
    }
    conflict.outputs.push_back({total_in, node.wallet.fresh_key().public_key});
    const auto payload = signing_payload(conflict);
    for (auto& ci : conflict.inputs)
        for (const auto& kp : node.wallet.keys())
            if (kp.public_key == ci.spender_key) {
                ci.signature = crypto::sign(kp.private_key, payload);
                break;
            }

    node.conflict_tx = std::move(conflict);
    node.conflict_in_branch = false;
    node.private_blocks.clear();
    node.private_tip = fork_parent;
    node.private_height = *node.chain.height_of(fork_parent);
    node.public_best_height = node.chain.tip_height();
    node.phase = NodeState::AttackPhase::Racing;
}

void Simulation::on_tip_change(NodeState& node, const TipUpdate& tu) {
    max_reorg_depth_ = std::max(max_reorg_depth_, uint64_t(tu.rolled_back));

    std::vector<const Block*> connected;
    for (const Digest& d : tu.connected_blocks)
        if (node.chain.on_canonical_chain(d))
            connected.push_back(node.chain.find_block(d));
    node.mempool.sync(node.chain.tip_utxo(), connected, tu.evicted);

    update_tx_tracking(node);
    attacker_after_tip_change(node);
    reschedule_mining(node);
    retry_deferred(node);
}

void Simulation::attacker_after_private_mine(NodeState& node, const Block& block) {
    const Digest d = block_digest(block.header);
    node.private_tip = d;
    node.private_height = block.header.height;
    node.private_blocks.push_back(d);
    if (block.transactions.size() > 1)
        node.conflict_in_branch = true;

    if (node.private_height > node.public_best_height) {
        // Strictly longer than anything public: release the branch.
        for (const Digest& pb : node.private_blocks)
            broadcast_block(node.id, *node.chain.find_block(pb));
        node.phase = NodeState::AttackPhase::Done;
        node.public_best_height = node.private_height;
        attacker_published_ = true;
        attack_publish_time_ = now_;
        attacker_private_block_count_ = node.private_blocks.size();
    }
}

void Simulation::handle_mine_success(const SimEvent& ev) {
    NodeState& node = *nodes_[size_t(ev.dest)];

    if (node.phase == NodeState::AttackPhase::Racing) {
        Block block;
        if (ev.has_block) {
            block = ev.block;
        } else {
            std::vector<Transaction> txs;
            if (!node.conflict_in_branch && node.conflict_tx)
                txs.push_back(*node.conflict_tx);
            block = make_raw_block(node.wallet.fresh_key().public_key, node.private_tip,
                                   node.private_height, txs, 0, ev.seq);
        }
        TipUpdate tu = node.chain.apply_block(block);
        if (tu.kind == TipUpdate::Kind::Rejected) {
            ++invalid_payloads_;
            reschedule_mining(node);
            return;
        }
        ++blocks_mined_[size_t(node.id)];
        mined_.push_back({block_digest(block.header), block.header.prev_digest, node.id});
        attacker_after_private_mine(node, block);
        if (tu.tip_changed())
            on_tip_change(node, tu); // private branch overtook our own store tip
        else
            reschedule_mining(node);
        return;
    }

    Block block;
    if (ev.has_block) {
        block = ev.block;
    } else {
        const crypto::PublicKey coinbase_key = node.wallet.fresh_key().public_key;
        block = miner::assemble_template(node.mempool, node.chain.tip(), node.chain.tip_height(),
                                         params_.block_reward, params_.difficulty_bits,
                                         coinbase_key, config_.max_txs_per_block);
        block.header.nonce = ev.seq; // difficulty 0; seq keeps sibling headers distinct
    }

    TipUpdate tu = node.chain.apply_block(block);
    if (tu.kind == TipUpdate::Kind::Rejected) {
        ++invalid_payloads_;
        reschedule_mining(node);
        return;
    }
    ++blocks_mined_[size_t(node.id)];
    mined_.push_back({block_digest(block.header), block.header.prev_digest, node.id});
    if (node.phase != NodeState::AttackPhase::None)
        node.public_best_height = std::max(node.public_best_height, block.header.height);
    on_tip_change(node, tu);
    broadcast_block(node.id, block);
}

void Simulation::log_event(const SimEvent& ev, bool executed) {
    ByteWriter w;
    w.u64be(uint64_t(ev.time));
    w.u64be(ev.seq);
    w.u8(uint8_t(ev.kind));
    w.u32be(uint32_t(ev.dest));
    w.u8(executed ? 1 : 0);
    switch (ev.kind) {
    case SimEvent::Kind::TxBroadcast:
        w.raw(txid(ev.tx).bytes);
        break;
    case SimEvent::Kind::BlockBroadcast:
        w.raw(block_digest(ev.block.header).bytes);
        break;
    case SimEvent::Kind::MineSuccess:
        w.u64be(ev.generation);
        if (ev.has_block)
            w.raw(block_digest(ev.block.header).bytes);
        break;
    case SimEvent::Kind::SubmitWorkload:
        w.u32be(uint32_t(ev.workload_index));
        break;
    }
    event_log_.update(w.data());
    ++events_processed_;

    if (trace_enabled_) {
        static const char* kKindNames[] = {"submit_workload", "tx_broadcast", "block_broadcast",
                                           "mine_success"};
        trace_ += "t=" + format_seconds(ev.time) + " seq=" + std::to_string(ev.seq) +
                  " dest=" + std::to_string(ev.dest) + " kind=" + kKindNames[size_t(ev.kind)];
        switch (ev.kind) {
        case SimEvent::Kind::TxBroadcast:
            trace_ += " txid=" + txid(ev.tx).hex();
            break;
        case SimEvent::Kind::BlockBroadcast:
            trace_ += " block=" + block_digest(ev.block.header).hex();
            break;
        case SimEvent::Kind::MineSuccess:
            trace_ += " generation=" + std::to_string(ev.generation);
            if (ev.has_block)
                trace_ += " block=" + block_digest(ev.block.header).hex();
            break;
        case SimEvent::Kind::SubmitWorkload:
            trace_ += " index=" + std::to_string(ev.workload_index);
            break;
        }
        trace_ += executed ? "" : " dropped";
        trace_ += "\n";
    }
}

bool Simulation::step() {
    if (queue_.empty())
        return false;
    SimEvent ev = queue_.top();
    queue_.pop();
    now_ = ev.time;

    bool executed = true;
    switch (ev.kind) {
    case SimEvent::Kind::SubmitWorkload:
        if (ev.time > config_.duration)
            executed = false;
        else
            handle_submit_workload(ev);
        break;
    case SimEvent::Kind::TxBroadcast:
        handle_tx_broadcast(ev); // deliveries drain even past `duration`
        break;
    case SimEvent::Kind::BlockBroadcast:
        handle_block_broadcast(ev);
        break;
    case SimEvent::Kind::MineSuccess:
        // Mining stops at duration; stale events were superseded by a re-target.
        if (ev.time > config_.duration ||
            ev.generation != nodes_[size_t(ev.dest)]->mine_generation)
            executed = false;
        else
            handle_mine_success(ev);
        break;
    }
    log_event(ev, executed);
    return true;
}

void Simulation::run() {
    while (step()) {
    }
}

void Simulation::inject_block(int dest, const Block& block, SimTime at) {
    SimEvent ev;
    ev.time = at;
    ev.dest = dest;
    ev.kind = SimEvent::Kind::BlockBroadcast;
    ev.block = block;
    schedule(std::move(ev));
}

void Simulation::inject_tx(int dest, const Transaction& tx, SimTime at) {
    SimEvent ev;
    ev.time = at;
    ev.dest = dest;
    ev.kind = SimEvent::Kind::TxBroadcast;
    ev.tx = tx;
    schedule(std::move(ev));
}

int Simulation::observer_node() const {
    for (int i = 0; i < config_.node_count; ++i)
        if (!(config_.attack.enabled && config_.attack.attacker_node == i))
            return i;
    return 0;
}

std::vector<Block> Simulation::observer_chain() const {
    const NodeState& obs = *nodes_[size_t(observer_node())];
    std::vector<Block> out;
    for (const Digest& d : obs.chain.canonical_chain())
        out.push_back(*obs.chain.find_block(d));
    return out;
}

void Simulation::finalize() {
    if (finalized_)
        return;
    finalized_ = true;

    report_.config_digest_hex = crypto::sha256(config_.canonical_text()).hex();
    report_.event_log_digest_hex = event_log_.finish().hex();
    report_.events_processed = events_processed_;
    report_.node_count = config_.node_count;
    for (const auto& n : nodes_)
        report_.node_tips.emplace_back(n->chain.tip().hex(), n->chain.tip_height());
    report_.blocks_mined = blocks_mined_;
    report_.total_blocks_mined = mined_.size();

    std::map<Digest, uint64_t> children;
    for (const auto& m : mined_)
        ++children[m.parent];
    for (const auto& [parent, count] : children)
        if (count > 1)
            report_.fork_count += count - 1;

    const NodeState& obs = *nodes_[size_t(observer_node())];
    std::set<Digest> canonical(obs.chain.canonical_chain().begin(),
                               obs.chain.canonical_chain().end());
    for (const auto& m : mined_)
        if (!canonical.count(m.digest))
            ++report_.orphaned_blocks;

    report_.max_reorg_depth = max_reorg_depth_;
    report_.invalid_payloads = invalid_payloads_;

    for (auto& rec : tx_records_) {
        if (rec.built)
            rec.final_depth = nodes_[size_t(rec.to_node)]->chain.confirmations(rec.tx_id);
        report_.txs.push_back(rec);
    }

    report_.attack_enabled = config_.attack.enabled;
    report_.attacker_published = attacker_published_;
    report_.attack_publish_time = attack_publish_time_;
    report_.attacker_private_blocks = attacker_private_block_count_;
}

const SimReport& Simulation::report() {
    finalize();
    return report_;
}

} // namespace chainlab::simnet
