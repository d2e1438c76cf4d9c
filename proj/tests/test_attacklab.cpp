// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chainlab/attacklab/attack.h"
#include "chainlab/simnet/rng.h"

using namespace chainlab;
using namespace chainlab::attacklab;

namespace {

// Brute-force random-walk oracle, independent of the attacklab code paths.
// 500 steps is generous for q well below 1/2: a walk still behind by then
// sits ~(1-2q)*500 steps deep, and its residual catch-up odds are far below
// the Monte Carlo resolution.
double walk_oracle(double q, int z, int walks, uint64_t seed) {
    int wins = 0;
    for (int w = 0; w < walks; ++w) {
        simnet::SimRng rng(simnet::mix_seed(seed, 0x0b5e55ed + uint64_t(w)));
        int deficit = z;
        for (int step = 0; step < 500 && deficit > 0; ++step) {
            if (rng.uniform01() < q)
                --deficit;
            else
                ++deficit;
        }
        if (deficit == 0)
            ++wins;
    }
    return double(wins) / double(walks);
}

} // namespace

TEST_CASE("catch-up probability: boundaries and domain") {
    CHECK(catchup_probability(0.5, 1) == 1.0);
    CHECK(catchup_probability(0.5, 10) == 1.0);
    CHECK(catchup_probability(0.9, 6) == 1.0);
    CHECK(catchup_probability(0.0, 1) == 0.0);
    CHECK(catchup_probability(0.0, 0) == 1.0);
    CHECK(catchup_probability(0.3, 0) == 1.0);
    CHECK(catchup_probability(0.3, 6) == doctest::Approx(std::pow(3.0 / 7.0, 6)));

    CHECK_THROWS_AS(catchup_probability(-0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(catchup_probability(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(catchup_probability(1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(catchup_probability(0.3, -1), std::invalid_argument);
}

TEST_CASE("the closed form survives a million-walk brute-force check") {
    // q = 0.3, z = 6: the walk oracle must reproduce (3/7)^6 ~ 0.0062.
    const double expected = catchup_probability(0.3, 6);
    const double observed = walk_oracle(0.3, 6, 1'000'000, 1234);
    const double sigma = std::sqrt(expected * (1 - expected) / 1e6);
    CHECK(std::abs(observed - expected) < 4 * sigma);

    // A coarser spot-check at another point of the curve.
    const double expected2 = catchup_probability(0.2, 3);
    const double observed2 = walk_oracle(0.2, 3, 200'000, 777);
    const double sigma2 = std::sqrt(expected2 * (1 - expected2) / 2e5);
    CHECK(std::abs(observed2 - expected2) < 4 * sigma2);
}

TEST_CASE("monte carlo estimates agree with the analytic curve") {
    for (double q : {0.2, 0.4}) {
        for (int z : {1, 4}) {
            AttackConfig cfg;
            cfg.q = q;
            cfg.z = z;
            cfg.trials = 10'000;
            cfg.seed = 71;
            cfg.mode = AttackMode::MonteCarlo;
            const AttackReport rep = run_attack(cfg);
            REQUIRE(rep.analytic.has_value());
            const double se = std::sqrt(*rep.analytic * (1 - *rep.analytic) / cfg.trials);
            CHECK(std::abs(rep.estimate - *rep.analytic) <= 3 * se + 1e-12);
        }
    }
}

TEST_CASE("boundary and tail behaviour of the race") {
    SUBCASE("q = 0.5 wins nearly always (truncation keeps it below 1)") {
        AttackConfig cfg;
        cfg.q = 0.5;
        cfg.z = 3;
        cfg.trials = 10'000;
        cfg.seed = 5;
        const AttackReport rep = run_attack(cfg);
        CHECK(rep.estimate >= 0.95);
        CHECK(rep.truncated == rep.trials - rep.successes);
    }
    SUBCASE("q = 0.1, z = 6 is a one-in-half-a-million event") {
        AttackConfig cfg;
        cfg.q = 0.1;
        cfg.z = 6;
        cfg.trials = 10'000;
        cfg.seed = 6;
        const AttackReport rep = run_attack(cfg);
        CHECK(rep.successes <= 2); // analytic ~ 1.9e-6, so 0 expected
    }
    SUBCASE("z = 0 races are already level") {
        AttackConfig cfg;
        cfg.q = 0.2;
        cfg.z = 0;
        cfg.trials = 100;
        const AttackReport rep = run_attack(cfg);
        CHECK(rep.estimate == 1.0);
        CHECK(rep.mean_race_length == 0.0);
    }
}

TEST_CASE("success estimates fall with depth and rise with attacker share") {
    AttackConfig cfg;
    cfg.trials = 10'000;
    cfg.seed = 31;
    cfg.mode = AttackMode::MonteCarlo;

    double prev = 1.1;
    for (int z = 1; z <= 6; ++z) {
        cfg.q = 0.3;
        cfg.z = z;
        const AttackReport rep = run_attack(cfg);
        CHECK(rep.estimate <= prev + 3 * rep.std_err + 1e-9);
        prev = rep.estimate;
    }

    prev = -0.1;
    for (double q : {0.1, 0.2, 0.3, 0.4}) {
        cfg.q = q;
        cfg.z = 3;
        const AttackReport rep = run_attack(cfg);
        CHECK(rep.estimate >= prev - 3 * rep.std_err - 1e-9);
        prev = rep.estimate;
    }
}

TEST_CASE("reports are identical across worker counts") {
    AttackConfig cfg;
    cfg.q = 0.35;
    cfg.z = 4;
    cfg.trials = 20'000;
    cfg.seed = 8;
    cfg.workers = 1;
    const AttackReport one = run_attack(cfg);
    cfg.workers = 8;
    const AttackReport eight = run_attack(cfg);
    CHECK(one.successes == eight.successes);
    CHECK(one.estimate == eight.estimate);
    CHECK(one.mean_race_length == eight.mean_race_length);
    CHECK(one.truncated == eight.truncated);
}

TEST_CASE("full simulation: a majority attacker reverts a confirmed payment") {
    AttackConfig cfg;
    cfg.q = 0.6;
    cfg.z = 1;
    cfg.trials = 3;
    cfg.seed = 2026;
    cfg.mode = AttackMode::FullSim;
    const AttackReport rep = run_attack(cfg);
    CHECK(rep.successes == rep.trials);
    CHECK(!rep.analytic.has_value());
    CHECK(rep.mean_race_length > 0);
}

TEST_CASE("csv rendering is stable and complete") {
    AttackConfig cfg;
    cfg.q = 0.25;
    cfg.z = 2;
    cfg.trials = 1000;
    cfg.seed = 4;
    const AttackReport rep = run_attack(cfg);
    const std::string csv = render_csv({rep});
    CHECK(csv.find("q,z,trials,successes,estimate,std_err,analytic\n") == 0);
    CHECK(csv.find("0.25,2,1000,") != std::string::npos);
    CHECK(render_csv({rep}) == csv);
}

TEST_CASE("config validation rejects bad parameters") {
    AttackConfig cfg;
    cfg.q = 1.0;
    CHECK_THROWS_AS(run_attack(cfg), std::invalid_argument);
    cfg.q = 0.3;
    cfg.trials = 0;
    CHECK_THROWS_AS(run_attack(cfg), std::invalid_argument);
}
