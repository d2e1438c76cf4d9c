// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainlab/ledger/types.h"

namespace chainlab::ledger {

// Canonical encoding is bit-exact by contract: digests define identity.
// Fixed field order, big-endian fixed-width integers, u32 length prefixes on
// variable byte strings.

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32be(uint32_t v);
    void u64be(uint64_t v);
    void raw(std::span<const uint8_t> data);
    void bytes(std::span<const uint8_t> data); // u32 length prefix + raw

    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8();
    uint32_t u32be();
    uint64_t u64be();
    void raw(std::span<uint8_t> out);
    std::vector<uint8_t> bytes(size_t max_len);

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    size_t position() const { return pos_; }

private:
    void need(size_t n);
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

std::vector<uint8_t> encode_transaction(const Transaction& tx);
Transaction decode_transaction(ByteReader& r);

/// Canonical transaction bytes with every input signature zeroed out. This is
/// what input signatures are computed over, so signatures never sign
/// themselves and re-signing leaves the payload unchanged.
std::vector<uint8_t> signing_payload(const Transaction& tx);

Digest txid(const Transaction& tx);
size_t serialized_size(const Transaction& tx);

/// Header layout: prev(32) | commitment(32) | nonce u64 | difficulty u32 |
/// height u64, 84 bytes total. The nonce sits at byte offset 64; the miner
/// patches it in place between hash attempts.
inline constexpr size_t kHeaderSize = 84;
inline constexpr size_t kHeaderNonceOffset = 64;

std::array<uint8_t, kHeaderSize> encode_header(const BlockHeader& header);
BlockHeader decode_header(ByteReader& r);
Digest block_digest(const BlockHeader& header);

Digest tx_commitment(const std::vector<Transaction>& txs);

std::vector<uint8_t> encode_block(const Block& block);
Block decode_block(std::span<const uint8_t> data);

} // namespace chainlab::ledger
