// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainlab/ledger/types.h"

namespace chainlab::simnet {

/// Simulated time in integer microseconds. The clock is a tick count, never
/// wall time, so runs replay exactly.
using SimTime = int64_t;
inline constexpr SimTime kMicrosPerSecond = 1'000'000;

/// Renders micros as decimal seconds with six digits, e.g. "12.500000".
std::string format_seconds(SimTime t);

/// Parses decimal seconds ("600", "0.25") into micros exactly; no binary
/// floating point involved. Throws std::invalid_argument on junk.
SimTime parse_seconds(const std::string& text);

class InvalidConfigError : public std::runtime_error {
public:
    InvalidConfigError(const std::string& field, const std::string& why)
        : std::runtime_error("invalid config: " + field + ": " + why), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct LatencyModel {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Fixed;
    SimTime fixed = kMicrosPerSecond;
    SimTime min = 0, max = 0; // uniform
};

/// During [start, end), nodes in side_a cannot reach side_b and vice versa.
struct Partition {
    SimTime start = 0, end = 0;
    std::vector<int> side_a, side_b;
};

struct WorkloadTx {
    SimTime time = 0;
    int from_node = 0, to_node = 0;
    ledger::Amount amount = 0;
    ledger::Amount fee = 0;
};

/// Double-spend attacker: mines honestly until workload tx `target_tx` is in
/// a public block, then withholds a private branch rooted at that block's
/// parent, seeded with a conflicting re-spend to itself, and publishes the
/// branch once strictly longer than the public chain.
struct AttackPlan {
    bool enabled = false;
    int attacker_node = -1;
    int target_tx = 0;
};

enum class MiningMode { Poisson, RealPow };

struct SimConfig {
    uint64_t seed = 1;
    int node_count = 1;
    std::vector<double> hash_shares; // empty = equal shares
    SimTime mean_block_interval = 600 * kMicrosPerSecond;
    LatencyModel latency;
    std::vector<Partition> partitions;
    ledger::Amount block_reward = 50;
    uint32_t difficulty_bits = 12; // real_pow mode only
    MiningMode mining_mode = MiningMode::Poisson;
    SimTime duration = 0;
    std::vector<WorkloadTx> workload;
    AttackPlan attack;
    size_t max_txs_per_block = 100;
    unsigned mine_workers = 1; // real_pow nonce search

    /// Effective per-node shares (fills in the equal-share default).
    std::vector<double> effective_shares() const;

    /// Throws InvalidConfigError naming the violated field.
    void validate() const;

    /// Canonical rendering; parse(canonical_text()) round-trips. Hashed into
    /// reports so outputs are traceable to their scenario.
    std::string canonical_text() const;

    static SimConfig parse(const std::string& text);
    static SimConfig load(const std::filesystem::path& path);
};

} // namespace chainlab::simnet
