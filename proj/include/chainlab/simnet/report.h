// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainlab/crypto/sha256.h"
#include "chainlab/ledger/types.h"
#include "chainlab/simnet/config.h"

namespace chainlab::simnet {

/// Outcome of one scripted payment, observed on the recipient's node.
struct TxRecord {
    int workload_index = 0;
    bool built = false; // false if the sender never had the funds
    Digest tx_id;
    SimTime submit_time = -1;
    int from_node = 0, to_node = 0;
    crypto::PublicKey recipient;
    ledger::Amount amount = 0;
    std::optional<SimTime> depth1_time; // first time confirmation depth reached 1
    std::optional<SimTime> depth6_time; // ... and 6, the waiting standard
    uint32_t max_depth = 0;
    uint32_t final_depth = 0;
};

/// Deterministic outcome record: fully determined by the SimConfig.
struct SimReport {
    std::string config_digest_hex;
    std::string event_log_digest_hex;
    uint64_t events_processed = 0;
    int node_count = 0;
    std::vector<std::pair<std::string, uint64_t>> node_tips; // (digest hex, height)
    std::vector<uint64_t> blocks_mined;                      // per node
    uint64_t total_blocks_mined = 0;
    uint64_t fork_count = 0;       // sibling blocks beyond the first per parent
    uint64_t max_reorg_depth = 0;  // largest single rollback at any node
    uint64_t orphaned_blocks = 0;  // mined but off the observer's final chain
    uint64_t invalid_payloads = 0; // dropped broadcasts
    std::vector<TxRecord> txs;

    bool attack_enabled = false;
    bool attacker_published = false;
    std::optional<SimTime> attack_publish_time;
    uint64_t attacker_private_blocks = 0;

    std::string render_text() const;

    /// Per-transaction confirmation times. Columns: txid, submit_time,
    /// time_to_depth1, time_to_depth6, final_depth ('-' when unreached).
    std::string render_csv() const;
};

} // namespace chainlab::simnet
