// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "chainlab/ledger/types.h"

namespace chainlab::ledger {

/// Static consensus parameters for one chain. Difficulty is a per-run
/// constant; there is no retargeting. The genesis block is a deterministic
/// function of these parameters, exempt from proof of work, paying the whole
/// reward to a published test key.
struct ChainParams {
    Amount block_reward = 50;
    uint32_t difficulty_bits = 12;

    Block make_genesis() const;

    bool operator==(const ChainParams&) const = default;
};

/// The published genesis key. Its seed is sha256("chainlab/genesis-key/v1"),
/// fixed so every chain with the same parameters starts from identical bytes.
crypto::KeyPair genesis_keypair();

} // namespace chainlab::ledger
