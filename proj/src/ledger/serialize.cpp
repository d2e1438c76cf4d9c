// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/ledger/serialize.h"

#include <cstring>

namespace chainlab::ledger {

namespace {

// Caps on list lengths while decoding, so corrupt length fields fail fast
// instead of triggering huge allocations.
constexpr uint32_t kMaxListLen = 1u << 20;

void write_output(ByteWriter& w, const TxOutput& out) {
    w.u64be(static_cast<uint64_t>(out.amount));
    w.bytes(out.recipient.bytes);
}

void write_input(ByteWriter& w, const TxInput& in, bool zero_signature) {
    w.raw(in.source.txid.bytes);
    w.u32be(in.source.index);
    w.bytes(in.spender_key.bytes);
    if (zero_signature)
        w.u32be(0);
    else
        w.bytes(in.signature.bytes);
}

std::vector<uint8_t> encode_tx_impl(const Transaction& tx, bool zero_signatures) {
    ByteWriter w;
    w.u64be(tx.coinbase_height);
    w.u32be(static_cast<uint32_t>(tx.inputs.size()));
    for (const auto& in : tx.inputs)
        write_input(w, in, zero_signatures);
    w.u32be(static_cast<uint32_t>(tx.outputs.size()));
    for (const auto& out : tx.outputs)
        write_output(w, out);
    return w.take();
}

} // namespace

void ByteWriter::u32be(uint32_t v) {
    buf_.push_back(uint8_t(v >> 24));
    buf_.push_back(uint8_t(v >> 16));
    buf_.push_back(uint8_t(v >> 8));
    buf_.push_back(uint8_t(v));
}

void ByteWriter::u64be(uint64_t v) {
    u32be(uint32_t(v >> 32));
    u32be(uint32_t(v));
}

void ByteWriter::raw(std::span<const uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteWriter::bytes(std::span<const uint8_t> data) {
    u32be(static_cast<uint32_t>(data.size()));
    raw(data);
}

void ByteReader::need(size_t n) {
    if (data_.size() - pos_ < n)
        throw ParseError("unexpected end of input at offset " + std::to_string(pos_));
}

uint8_t ByteReader::u8() {
    need(1);
    return data_[pos_++];
}

uint32_t ByteReader::u32be() {
    need(4);
    uint32_t v = (uint32_t(data_[pos_]) << 24) | (uint32_t(data_[pos_ + 1]) << 16) |
                 (uint32_t(data_[pos_ + 2]) << 8) | uint32_t(data_[pos_ + 3]);
    pos_ += 4;
    return v;
}

uint64_t ByteReader::u64be() {
    uint64_t hi = u32be();
    uint64_t lo = u32be();
    return (hi << 32) | lo;
}

void ByteReader::raw(std::span<uint8_t> out) {
    need(out.size());
    std::memcpy(out.data(), data_.data() + pos_, out.size());
    pos_ += out.size();
}

std::vector<uint8_t> ByteReader::bytes(size_t max_len) {
    uint32_t len = u32be();
    if (len > max_len)
        throw ParseError("byte string length " + std::to_string(len) + " exceeds limit");
    need(len);
    std::vector<uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + len);
    pos_ += len;
    return out;
}

std::vector<uint8_t> encode_transaction(const Transaction& tx) {
    return encode_tx_impl(tx, false);
}

std::vector<uint8_t> signing_payload(const Transaction& tx) {
    return encode_tx_impl(tx, true);
}

Transaction decode_transaction(ByteReader& r) {
    Transaction tx;
    tx.coinbase_height = r.u64be();
    uint32_t n_in = r.u32be();
    if (n_in > kMaxListLen)
        throw ParseError("input count too large");
    tx.inputs.reserve(n_in);
    for (uint32_t i = 0; i < n_in; ++i) {
        TxInput in;
        r.raw(in.source.txid.bytes);
        in.source.index = r.u32be();
        auto key = r.bytes(64);
        if (key.size() != in.spender_key.bytes.size())
            throw ParseError("bad spender key length " + std::to_string(key.size()));
        std::copy(key.begin(), key.end(), in.spender_key.bytes.begin());
        auto sig = r.bytes(128);
        if (sig.size() != in.signature.bytes.size())
            throw ParseError("bad signature length " + std::to_string(sig.size()));
        std::copy(sig.begin(), sig.end(), in.signature.bytes.begin());
        tx.inputs.push_back(std::move(in));
    }
    uint32_t n_out = r.u32be();
    if (n_out > kMaxListLen)
        throw ParseError("output count too large");
    tx.outputs.reserve(n_out);
    for (uint32_t i = 0; i < n_out; ++i) {
        TxOutput out;
        uint64_t amount = r.u64be();
        if (amount > uint64_t(INT64_MAX))
            throw ParseError("output amount out of range");
        out.amount = static_cast<Amount>(amount);
        auto key = r.bytes(64);
        if (key.size() != out.recipient.bytes.size())
            throw ParseError("bad recipient key length " + std::to_string(key.size()));
        std::copy(key.begin(), key.end(), out.recipient.bytes.begin());
        tx.outputs.push_back(out);
    }
    return tx;
}

Digest txid(const Transaction& tx) {
    return crypto::sha256(encode_transaction(tx));
}

size_t serialized_size(const Transaction& tx) {
    // 8 height + 4 input count + 4 output count, inputs 32+4+4+32+4+64,
    // outputs 8+4+32.
    return 16 + tx.inputs.size() * 140 + tx.outputs.size() * 44;
}

std::array<uint8_t, kHeaderSize> encode_header(const BlockHeader& header) {
    ByteWriter w;
    w.raw(header.prev_digest.bytes);
    w.raw(header.tx_commitment.bytes);
    w.u64be(header.nonce);
    w.u32be(header.difficulty_bits);
    w.u64be(header.height);
    std::array<uint8_t, kHeaderSize> out;
    std::memcpy(out.data(), w.data().data(), kHeaderSize);
    return out;
}

BlockHeader decode_header(ByteReader& r) {
    BlockHeader h;
    r.raw(h.prev_digest.bytes);
    r.raw(h.tx_commitment.bytes);
    h.nonce = r.u64be();
    h.difficulty_bits = r.u32be();
    h.height = r.u64be();
    return h;
}

Digest block_digest(const BlockHeader& header) {
    auto bytes = encode_header(header);
    return crypto::sha256(std::span<const uint8_t>(bytes));
}

Digest tx_commitment(const std::vector<Transaction>& txs) {
    crypto::Sha256 h;
    for (const auto& tx : txs) {
        Digest id = txid(tx);
        h.update(id.bytes.data(), id.bytes.size());
    }
    return h.finish();
}

std::vector<uint8_t> encode_block(const Block& block) {
    ByteWriter w;
    auto header = encode_header(block.header);
    w.raw(header);
    w.u32be(static_cast<uint32_t>(block.transactions.size()));
    for (const auto& tx : block.transactions)
        w.raw(encode_transaction(tx));
    return w.take();
}

Block decode_block(std::span<const uint8_t> data) {
    ByteReader r(data);
    Block b;
    b.header = decode_header(r);
    uint32_t n_tx = r.u32be();
    if (n_tx > kMaxListLen)
        throw ParseError("transaction count too large");
    b.transactions.reserve(n_tx);
    for (uint32_t i = 0; i < n_tx; ++i)
        b.transactions.push_back(decode_transaction(r));
    if (!r.done())
        throw ParseError("trailing bytes after block");
    return b;
}

} // namespace chainlab::ledger
