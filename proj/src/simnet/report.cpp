// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/simnet/report.h"

#include <sstream>

namespace chainlab::simnet {

namespace {

std::string opt_time(const std::optional<SimTime>& t) {
    return t ? format_seconds(*t) : "-";
}

} // namespace

std::string SimReport::render_text() const {
    std::ostringstream os;
    os << "chainlab-report v1\n";
    os << "config_digest = " << config_digest_hex << "\n";
    os << "event_log_digest = " << event_log_digest_hex << "\n";
    os << "events = " << events_processed << "\n";
    os << "nodes = " << node_count << "\n";
    for (int i = 0; i < node_count; ++i)
        os << "tip node=" << i << " height=" << node_tips[size_t(i)].second << " digest="
           << node_tips[size_t(i)].first << "\n";
    for (int i = 0; i < node_count; ++i)
        os << "blocks_mined node=" << i << " count=" << blocks_mined[size_t(i)] << "\n";
    os << "total_blocks_mined = " << total_blocks_mined << "\n";
    os << "fork_count = " << fork_count << "\n";
    os << "max_reorg_depth = " << max_reorg_depth << "\n";
    os << "orphaned_blocks = " << orphaned_blocks << "\n";
    os << "invalid_payloads = " << invalid_payloads << "\n";
    if (attack_enabled) {
        if (attacker_published)
            os << "attack = published at=" << opt_time(attack_publish_time)
               << " private_blocks=" << attacker_private_blocks << "\n";
        else
            os << "attack = never_published\n";
    }
    for (const auto& r : txs) {
        os << "tx index=" << r.workload_index;
        if (!r.built) {
            os << " unfunded\n";
            continue;
        }
        os << " txid=" << r.tx_id.hex() << " submit=" << format_seconds(r.submit_time)
           << " depth1=" << opt_time(r.depth1_time) << " depth6=" << opt_time(r.depth6_time)
           << " max_depth=" << r.max_depth << " final_depth=" << r.final_depth
           << " amount=" << r.amount << " to_node=" << r.to_node
           << " recipient=" << r.recipient.hex() << "\n";
    }
    return os.str();
}

std::string SimReport::render_csv() const {
    std::ostringstream os;
    os << "txid,submit_time,time_to_depth1,time_to_depth6,final_depth\n";
    for (const auto& r : txs) {
        if (!r.built) {
            os << "unfunded-" << r.workload_index << ",-,-,-,-\n";
            continue;
        }
        os << r.tx_id.hex() << "," << format_seconds(r.submit_time) << ","
           << opt_time(r.depth1_time) << "," << opt_time(r.depth6_time) << "," << r.final_depth
           << "\n";
    }
    return os.str();
}

} // namespace chainlab::simnet
