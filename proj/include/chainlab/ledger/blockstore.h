// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chainlab/ledger/chainstore.h"

namespace chainlab::ledger {

// On-disk chain format: an append-only sequence of framed records, each a
// 4-byte big-endian length followed by the canonical block bytes, genesis
// first. A companion text index ("<store>.idx") maps hex block digest to the
// byte offset of the frame's length prefix, one entry per line, file order.

std::filesystem::path index_path_for(const std::filesystem::path& store);

void write_block_store(const std::filesystem::path& store, const std::vector<Block>& blocks);

/// Raw frames in file order. Throws ParseError on framing damage.
std::vector<std::vector<uint8_t>> read_frames(const std::filesystem::path& store);

std::vector<Block> read_block_store(const std::filesystem::path& store);

struct VerifyResult {
    bool ok = false;
    int failed_frame = -1; // index of the earliest bad frame, -1 if framing broke
    std::string block_digest_hex;
    std::string reason;
    size_t blocks = 0;
    uint64_t tip_height = 0;
    std::string tip_digest_hex;
};

/// Full replay verification from genesis. Self-contained: the block reward is
/// taken from the genesis coinbase and the difficulty from the first
/// non-genesis header (all later headers must agree). When the companion
/// index exists, every frame's recomputed digest is checked against it, which
/// also catches tampering with the final (childless) block. Reports the
/// earliest frame at which the hash chain or validation breaks.
VerifyResult verify_store(const std::filesystem::path& store);

/// Reconstructs a validated ChainStore from a store file (parameters derived
/// as in verify_store). Throws std::runtime_error naming the offending block
/// when the store does not replay cleanly.
ChainStore load_chain(const std::filesystem::path& store);

/// Human-readable rendering for chain inspection.
std::string dump_block(const Block& block);

} // namespace chainlab::ledger
