// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chainlab::attacklab {

/// Probability that a random walk starting z behind, winning each step with
/// probability q and losing otherwise, ever reaches parity: 1 for q >= 1/2,
/// (q/(1-q))^z below. Throws std::invalid_argument outside 0 <= q < 1, z >= 0.
double catchup_probability(double q, int z);

enum class AttackMode {
    Analytic,   // closed form only
    MonteCarlo, // direct simulation of the block race
    FullSim,    // network simulation with a withholding double-spender
};

struct AttackConfig {
    double q = 0.3;              // attacker's share of hash power
    int z = 6;                   // confirmation depth the victim waits for
    int trials = 10000;          // races (ignored in analytic mode)
    uint64_t seed = 1;
    int max_race_length = 10000; // steps before a race is cut off
    AttackMode mode = AttackMode::MonteCarlo;
    unsigned workers = 1;

    void validate() const; // throws std::invalid_argument naming the field
};

struct AttackReport {
    double q = 0;
    int z = 0;
    int trials = 0;
    int successes = 0;
    double estimate = 0;
    double std_err = 0;              // binomial standard error of the estimate
    std::optional<double> analytic;  // closed form, when defined for the mode
    double mean_race_length = 0;
    int truncated = 0; // races cut off at max_race_length (counted as failures)
};

/// Runs the configured experiment. Trials derive independent sub-seeds from
/// (seed, trial index), so the report does not depend on worker count or
/// execution order.
AttackReport run_attack(const AttackConfig& config);

/// CSV rows: q,z,trials,successes,estimate,std_err,analytic.
std::string render_csv(const std::vector<AttackReport>& reports);

} // namespace chainlab::attacklab
