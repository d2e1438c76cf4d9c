// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/attacklab/attack.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "chainlab/simnet/simulation.h"

namespace chainlab::attacklab {

double catchup_probability(double q, int z) {
    if (!(q >= 0.0) || !(q < 1.0))
        throw std::invalid_argument("q must satisfy 0 <= q < 1");
    if (z < 0)
        throw std::invalid_argument("z must be non-negative");
    if (q >= 0.5)
        return 1.0;
    if (z == 0)
        return 1.0; // already level
    if (q == 0.0)
        return 0.0;
    return std::pow(q / (1.0 - q), double(z));
}

void AttackConfig::validate() const {
    if (!(q >= 0.0) || !(q < 1.0))
        throw std::invalid_argument("q must satisfy 0 <= q < 1");
    if (z < 0)
        throw std::invalid_argument("z must be non-negative");
    if (trials < 1 && mode != AttackMode::Analytic)
        throw std::invalid_argument("trials must be at least 1");
    if (max_race_length < 1)
        throw std::invalid_argument("max_race_length must be at least 1");
}

namespace {

struct TrialStats {
    uint64_t successes = 0;
    uint64_t truncated = 0;
    uint64_t total_steps = 0;
};

// One race: the attacker starts z behind and must draw level. Each step it
// gains with probability q, else falls one further behind. Races past
// max_race_length count as failures; their tail mass is negligible for
// q < 1/2 and they are reported separately.
void run_race(double q, int z, int max_len, uint64_t seed, TrialStats& stats) {
    simnet::SimRng rng(seed);
    int64_t deficit = z;
    if (deficit == 0) {
        ++stats.successes;
        return;
    }
    for (int step = 1; step <= max_len; ++step) {
        if (rng.uniform01() < q)
            --deficit;
        else
            ++deficit;
        ++stats.total_steps;
        if (deficit == 0) {
            ++stats.successes;
            return;
        }
    }
    ++stats.truncated;
}

TrialStats monte_carlo(const AttackConfig& cfg) {
    unsigned workers = cfg.workers == 0 ? 1 : cfg.workers;
    workers = std::min<unsigned>(workers, unsigned(cfg.trials));
    std::vector<TrialStats> partial(workers);
    auto work = [&](unsigned w) {
        // Per-trial sub-seeds keep the aggregate independent of the split.
        for (int t = int(w); t < cfg.trials; t += int(workers))
            run_race(cfg.q, cfg.z, cfg.max_race_length, simnet::mix_seed(cfg.seed, uint64_t(t)),
                     partial[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w)
            threads.emplace_back(work, w);
        for (auto& t : threads)
            t.join();
    }
    TrialStats total;
    for (const auto& p : partial) {
        total.successes += p.successes;
        total.truncated += p.truncated;
        total.total_steps += p.total_steps;
    }
    return total;
}

// The paper's re-route scenario end to end: two nodes, the attacker holding
// the paying wallet. It broadcasts the payment honestly, waits for a public
// block to confirm it, then mines a withheld branch with a conflicting spend
// and publishes once longer. Success: the victim saw depth >= 1 and ends at
// depth 0.
TrialStats full_sim(const AttackConfig& cfg, uint64_t& race_blocks) {
    TrialStats total;
    race_blocks = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        simnet::SimConfig sim;
        sim.seed = simnet::mix_seed(cfg.seed, uint64_t(t));
        sim.node_count = 2;
        sim.hash_shares = {1.0 - cfg.q, cfg.q};
        sim.mean_block_interval = 600 * simnet::kMicrosPerSecond;
        sim.latency.kind = simnet::LatencyModel::Kind::Fixed;
        sim.latency.fixed = 1 * simnet::kMicrosPerSecond;
        sim.block_reward = 50;
        sim.mining_mode = simnet::MiningMode::Poisson;
        sim.duration = 300 * sim.mean_block_interval;
        sim.workload.push_back({1 * simnet::kMicrosPerSecond, 1, 0, 30, 0});
        sim.attack.enabled = true;
        sim.attack.attacker_node = 1;
        sim.attack.target_tx = 0;

        simnet::Simulation s(sim);
        s.run();
        const simnet::SimReport& rep = s.report();
        const simnet::TxRecord& rec = rep.txs.at(0);
        const bool confirmed_then_gone =
            rec.built && rec.depth1_time.has_value() && rec.final_depth == 0;
        if (confirmed_then_gone && rep.attacker_published)
            ++total.successes;
        race_blocks += rep.attacker_private_blocks;
        total.total_steps += rep.attacker_private_blocks;
    }
    return total;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.8g", v);
    return buf;
}

} // namespace

AttackReport run_attack(const AttackConfig& config) {
    config.validate();
    AttackReport rep;
    rep.q = config.q;
    rep.z = config.z;

    if (config.mode == AttackMode::Analytic) {
        rep.analytic = catchup_probability(config.q, config.z);
        rep.estimate = *rep.analytic;
        return rep;
    }

    TrialStats stats;
    if (config.mode == AttackMode::MonteCarlo) {
        stats = monte_carlo(config);
        rep.analytic = catchup_probability(config.q, config.z);
    } else {
        uint64_t race_blocks = 0;
        stats = full_sim(config, race_blocks);
        // No closed form for the full protocol race; leave analytic unset.
    }

    rep.trials = config.trials;
    rep.successes = int(stats.successes);
    rep.truncated = int(stats.truncated);
    rep.estimate = double(stats.successes) / double(config.trials);
    rep.std_err = std::sqrt(rep.estimate * (1.0 - rep.estimate) / double(config.trials));
    rep.mean_race_length = double(stats.total_steps) / double(config.trials);
    return rep;
}

std::string render_csv(const std::vector<AttackReport>& reports) {
    std::ostringstream os;
    os << "q,z,trials,successes,estimate,std_err,analytic\n";
    for (const auto& r : reports) {
        os << fmt(r.q) << "," << r.z << "," << r.trials << "," << r.successes << ","
           << fmt(r.estimate) << "," << fmt(r.std_err) << ","
           << (r.analytic ? fmt(*r.analytic) : "-") << "\n";
    }
    return os.str();
}

} // namespace chainlab::attacklab
