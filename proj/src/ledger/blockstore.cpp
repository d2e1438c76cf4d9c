// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/ledger/blockstore.h"

#include <fstream>
#include <sstream>

#include "chainlab/ledger/serialize.h"
#include "chainlab/util/hex.h"

namespace chainlab::ledger {

namespace {

constexpr uint32_t kMaxFrameLen = 64u << 20;

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open block store: " + path.string());
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

VerifyResult verify_fail(int frame, std::string digest_hex, std::string reason) {
    VerifyResult r;
    r.ok = false;
    r.failed_frame = frame;
    r.block_digest_hex = std::move(digest_hex);
    r.reason = std::move(reason);
    return r;
}

} // namespace

std::filesystem::path index_path_for(const std::filesystem::path& store) {
    std::filesystem::path idx = store;
    idx += ".idx";
    return idx;
}

void write_block_store(const std::filesystem::path& store, const std::vector<Block>& blocks) {
    std::ofstream out(store, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open block store for writing: " + store.string());
    std::ofstream idx(index_path_for(store), std::ios::trunc);
    if (!idx)
        throw std::runtime_error("cannot open block index for writing: " +
                                 index_path_for(store).string());

    uint64_t offset = 0;
    for (const Block& b : blocks) {
        const auto bytes = encode_block(b);
        const uint32_t len = static_cast<uint32_t>(bytes.size());
        const uint8_t prefix[4] = {uint8_t(len >> 24), uint8_t(len >> 16), uint8_t(len >> 8),
                                   uint8_t(len)};
        out.write(reinterpret_cast<const char*>(prefix), 4);
        out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        idx << block_digest(b.header).hex() << " " << offset << "\n";
        offset += 4 + bytes.size();
    }
    if (!out || !idx)
        throw std::runtime_error("short write to block store: " + store.string());
}

std::vector<std::vector<uint8_t>> read_frames(const std::filesystem::path& store) {
    const auto data = read_file(store);
    std::vector<std::vector<uint8_t>> frames;
    size_t pos = 0;
    while (pos < data.size()) {
        if (data.size() - pos < 4)
            throw ParseError("truncated frame length at offset " + std::to_string(pos));
        uint32_t len = (uint32_t(data[pos]) << 24) | (uint32_t(data[pos + 1]) << 16) |
                       (uint32_t(data[pos + 2]) << 8) | uint32_t(data[pos + 3]);
        pos += 4;
        if (len > kMaxFrameLen || data.size() - pos < len)
            throw ParseError("frame at offset " + std::to_string(pos - 4) +
                             " claims length beyond file end");
        frames.emplace_back(data.begin() + pos, data.begin() + pos + len);
        pos += len;
    }
    return frames;
}

std::vector<Block> read_block_store(const std::filesystem::path& store) {
    std::vector<Block> blocks;
    for (const auto& frame : read_frames(store))
        blocks.push_back(decode_block(frame));
    return blocks;
}

VerifyResult verify_store(const std::filesystem::path& store) {
    // Stage 1: framing and decoding.
    std::vector<std::vector<uint8_t>> frames;
    try {
        frames = read_frames(store);
    } catch (const ParseError& e) {
        return verify_fail(-1, "", std::string("framing: ") + e.what());
    }
    if (frames.empty())
        return verify_fail(-1, "", "store is empty");

    std::vector<Block> blocks;
    std::vector<Digest> digests;
    for (size_t i = 0; i < frames.size(); ++i) {
        try {
            blocks.push_back(decode_block(frames[i]));
        } catch (const ParseError& e) {
            return verify_fail(static_cast<int>(i), "", std::string("decode: ") + e.what());
        }
        digests.push_back(block_digest(blocks.back().header));
    }

    // Stage 2: cross-check the companion index when present. This pins every
    // frame's digest, including the childless tip.
    const auto idx_path = index_path_for(store);
    if (std::filesystem::exists(idx_path)) {
        std::ifstream idx(idx_path);
        std::vector<std::pair<std::string, uint64_t>> entries;
        std::string digest_hex;
        uint64_t offset;
        while (idx >> digest_hex >> offset)
            entries.emplace_back(digest_hex, offset);
        if (entries.size() != frames.size())
            return verify_fail(-1, "",
                               "index lists " + std::to_string(entries.size()) + " blocks, store has " +
                                   std::to_string(frames.size()));
        uint64_t expect_offset = 0;
        for (size_t i = 0; i < frames.size(); ++i) {
            if (entries[i].second != expect_offset)
                return verify_fail(static_cast<int>(i), digests[i].hex(),
                                   "index offset mismatch at frame " + std::to_string(i));
            if (entries[i].first != digests[i].hex())
                return verify_fail(static_cast<int>(i), digests[i].hex(),
                                   "block digest does not match index entry " + entries[i].first);
            expect_offset += 4 + frames[i].size();
        }
    }

    // Stage 3: genesis shape, then parameter recovery from it.
    const Block& genesis = blocks.front();
    if (genesis.header.height != 0 || !genesis.header.prev_digest.is_zero() ||
        genesis.transactions.size() != 1 || !genesis.transactions.front().is_coinbase())
        return verify_fail(0, digests[0].hex(), "malformed genesis block");
    if (tx_commitment(genesis.transactions) != genesis.header.tx_commitment)
        return verify_fail(0, digests[0].hex(), "genesis commitment mismatch");
    Amount reward = 0;
    for (const auto& out : genesis.transactions.front().outputs)
        reward += out.amount;

    ChainParams params;
    params.block_reward = reward;
    params.difficulty_bits = blocks.size() > 1 ? blocks[1].header.difficulty_bits : 0;

    ChainStore chain(params);
    if (chain.genesis_digest() != digests[0])
        return verify_fail(0, digests[0].hex(),
                           "genesis does not match parameters derived from it");

    // Stage 4: full replay with validation. The first failure is the earliest
    // broken linkage.
    for (size_t i = 1; i < blocks.size(); ++i) {
        if (blocks[i].header.difficulty_bits != params.difficulty_bits)
            return verify_fail(static_cast<int>(i), digests[i].hex(),
                               "difficulty field differs from the rest of the chain");
        TipUpdate tu = chain.apply_block(blocks[i]);
        switch (tu.kind) {
        case TipUpdate::Kind::Rejected:
            return verify_fail(static_cast<int>(i), digests[i].hex(),
                               "validation failed: " + tu.rejection.describe());
        case TipUpdate::Kind::Orphaned:
            return verify_fail(static_cast<int>(i), digests[i].hex(),
                               "broken linkage: parent " + blocks[i].header.prev_digest.hex() +
                                   " not found among earlier blocks");
        case TipUpdate::Kind::Duplicate:
            return verify_fail(static_cast<int>(i), digests[i].hex(), "duplicate block in store");
        default:
            break;
        }
    }

    VerifyResult r;
    r.ok = true;
    r.blocks = blocks.size();
    r.tip_height = chain.tip_height();
    r.tip_digest_hex = chain.tip().hex();
    return r;
}

ChainStore load_chain(const std::filesystem::path& store) {
    const VerifyResult check = verify_store(store);
    if (!check.ok)
        throw std::runtime_error("store " + store.string() + " fails verification: " +
                                 check.reason +
                                 (check.block_digest_hex.empty() ? "" : " at block " + check.block_digest_hex));
    const auto blocks = read_block_store(store);
    Amount reward = 0;
    for (const auto& out : blocks.front().transactions.front().outputs)
        reward += out.amount;
    ChainParams params;
    params.block_reward = reward;
    params.difficulty_bits = blocks.size() > 1 ? blocks[1].header.difficulty_bits : 0;
    ChainStore chain(params);
    for (size_t i = 1; i < blocks.size(); ++i)
        chain.apply_block(blocks[i]);
    return chain;
}

std::string dump_block(const Block& block) {
    std::ostringstream os;
    const Digest d = block_digest(block.header);
    os << "block " << d.hex() << "\n";
    os << "  height      " << block.header.height << "\n";
    os << "  prev        " << block.header.prev_digest.hex() << "\n";
    os << "  commitment  " << block.header.tx_commitment.hex() << "\n";
    os << "  nonce       " << block.header.nonce << "\n";
    os << "  difficulty  " << block.header.difficulty_bits << "\n";
    os << "  txs         " << block.transactions.size() << "\n";
    for (size_t t = 0; t < block.transactions.size(); ++t) {
        const Transaction& tx = block.transactions[t];
        os << "  tx[" << t << "] " << txid(tx).hex() << (tx.is_coinbase() ? " (coinbase)" : "")
           << "\n";
        for (const auto& in : tx.inputs)
            os << "    in  " << in.source.txid.hex() << ":" << in.source.index << " key "
               << in.spender_key.hex().substr(0, 16) << "...\n";
        for (const auto& out : tx.outputs)
            os << "    out " << out.amount << " -> " << out.recipient.hex() << "\n";
    }
    return os.str();
}

} // namespace chainlab::ledger
