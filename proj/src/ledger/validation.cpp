// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/ledger/validation.h"

#include <set>

#include "chainlab/ledger/serialize.h"

namespace chainlab::ledger {

const char* to_string(TxError e) {
    switch (e) {
    case TxError::UnknownOutpoint: return "UnknownOutpoint";
    case TxError::AlreadySpent: return "AlreadySpent";
    case TxError::BadSignature: return "BadSignature";
    case TxError::WrongOwner: return "WrongOwner";
    case TxError::ValueOverflow: return "ValueOverflow";
    case TxError::NegativeFee: return "NegativeFee";
    case TxError::BadStructure: return "BadStructure";
    }
    return "?";
}

const char* to_string(BlockError e) {
    switch (e) {
    case BlockError::BadProofOfWork: return "BadProofOfWork";
    case BlockError::BadCommitment: return "BadCommitment";
    case BlockError::BadCoinbase: return "BadCoinbase";
    case BlockError::BadHeight: return "BadHeight";
    case BlockError::BadTransaction: return "BadTransaction";
    }
    return "?";
}

std::string BlockCheck::describe() const {
    if (ok())
        return "ok";
    std::string s = to_string(*error);
    if (error == BlockError::BadTransaction && tx_error)
        s += std::string("/") + to_string(*tx_error) + " at tx " + std::to_string(tx_index);
    if (!detail.empty())
        s += ": " + detail;
    return s;
}

namespace {

TxCheck fail(TxError e, std::string detail) {
    TxCheck c;
    c.error = e;
    c.detail = std::move(detail);
    return c;
}

bool add_overflows(Amount a, Amount b, Amount* out) {
    return __builtin_add_overflow(a, b, out);
}

TxCheck structural_check(const Transaction& tx) {
    if (tx.outputs.empty())
        return fail(TxError::BadStructure, "transaction has no outputs");
    for (size_t i = 0; i < tx.outputs.size(); ++i)
        if (tx.outputs[i].amount <= 0)
            return fail(TxError::BadStructure,
                        "output " + std::to_string(i) + " has non-positive amount");
    return {};
}

// Shared by mempool and block validation. `consumed` tracks outpoints spent
// earlier in the surrounding block, to tell AlreadySpent from UnknownOutpoint.
TxCheck validate_spend(const Transaction& tx, const UtxoSet& utxo,
                       const std::set<Outpoint>* consumed,
                       std::vector<std::pair<Outpoint, TxOutput>>* undo) {
    if (tx.is_coinbase())
        return fail(TxError::BadStructure, "coinbase outside of block context");
    if (tx.coinbase_height != 0)
        return fail(TxError::BadStructure, "non-coinbase with coinbase height set");
    if (auto s = structural_check(tx); !s.ok())
        return s;

    const auto payload = signing_payload(tx);
    std::set<Outpoint> seen;
    Amount total_in = 0;
    for (size_t i = 0; i < tx.inputs.size(); ++i) {
        const TxInput& in = tx.inputs[i];
        if (!seen.insert(in.source).second)
            return fail(TxError::AlreadySpent,
                        "outpoint duplicated within transaction at input " + std::to_string(i));
        const TxOutput* out = utxo.lookup(in.source);
        if (!out) {
            if (consumed && consumed->count(in.source))
                return fail(TxError::AlreadySpent, "outpoint spent earlier in this block at input " +
                                                       std::to_string(i));
            return fail(TxError::UnknownOutpoint,
                        in.source.txid.hex() + ":" + std::to_string(in.source.index));
        }
        if (out->recipient != in.spender_key)
            return fail(TxError::WrongOwner, "input " + std::to_string(i));
        if (!crypto::verify(in.spender_key, payload, in.signature))
            return fail(TxError::BadSignature, "input " + std::to_string(i));
        if (add_overflows(total_in, out->amount, &total_in))
            return fail(TxError::ValueOverflow, "input sum");
        if (undo)
            undo->emplace_back(in.source, *out);
    }

    Amount total_out = 0;
    for (const auto& out : tx.outputs)
        if (add_overflows(total_out, out.amount, &total_out))
            return fail(TxError::ValueOverflow, "output sum");

    if (total_out > total_in)
        return fail(TxError::NegativeFee, "outputs " + std::to_string(total_out) + " exceed inputs " +
                                              std::to_string(total_in));

    TxCheck ok;
    ok.fee = total_in - total_out;
    return ok;
}

BlockCheck block_fail(BlockError e, std::string detail) {
    BlockCheck c;
    c.error = e;
    c.detail = std::move(detail);
    return c;
}

} // namespace

TxCheck validate_transaction(const Transaction& tx, const UtxoSet& utxo) {
    return validate_spend(tx, utxo, nullptr, nullptr);
}

BlockCheck validate_block(const Block& block, const UtxoSet& parent_utxo,
                          uint32_t expected_difficulty, Amount block_reward) {
    const Digest digest = block_digest(block.header);
    if (block.header.difficulty_bits != expected_difficulty)
        return block_fail(BlockError::BadProofOfWork,
                          "difficulty field " + std::to_string(block.header.difficulty_bits) +
                              ", expected " + std::to_string(expected_difficulty));
    if (crypto::leading_zero_bits(digest) < expected_difficulty)
        return block_fail(BlockError::BadProofOfWork, "digest " + digest.hex() + " has " +
                                                          std::to_string(crypto::leading_zero_bits(digest)) +
                                                          " leading zero bits, needs " +
                                                          std::to_string(expected_difficulty));
    if (block.transactions.empty())
        return block_fail(BlockError::BadCoinbase, "block has no transactions");
    if (tx_commitment(block.transactions) != block.header.tx_commitment)
        return block_fail(BlockError::BadCommitment, "commitment does not match transaction list");

    const Transaction& coinbase = block.transactions.front();
    if (!coinbase.is_coinbase())
        return block_fail(BlockError::BadCoinbase, "first transaction has inputs");
    if (coinbase.coinbase_height != block.header.height)
        return block_fail(BlockError::BadCoinbase, "coinbase height field does not match header");
    if (coinbase.outputs.empty())
        return block_fail(BlockError::BadCoinbase, "coinbase has no outputs");
    for (const auto& out : coinbase.outputs)
        if (out.amount <= 0)
            return block_fail(BlockError::BadCoinbase, "coinbase output with non-positive amount");

    BlockCheck result;
    UtxoSet working = parent_utxo;
    std::set<Outpoint> consumed;

    // Non-coinbase transactions, in order; each may spend outputs created by
    // its predecessors in this block.
    for (size_t i = 1; i < block.transactions.size(); ++i) {
        const Transaction& tx = block.transactions[i];
        if (tx.is_coinbase()) {
            BlockCheck c = block_fail(BlockError::BadCoinbase,
                                      "extra coinbase at index " + std::to_string(i));
            c.tx_index = static_cast<int>(i);
            return c;
        }
        TxCheck check = validate_spend(tx, working, &consumed, &result.spent_undo);
        if (!check.ok()) {
            BlockCheck c = block_fail(BlockError::BadTransaction, check.detail);
            c.tx_index = static_cast<int>(i);
            c.tx_error = check.error;
            return c;
        }
        if (add_overflows(result.total_fees, check.fee, &result.total_fees))
            return block_fail(BlockError::BadTransaction, "fee sum overflow");
        for (const auto& in : tx.inputs) {
            working.erase(in.source);
            consumed.insert(in.source);
        }
        const Digest id = txid(tx);
        for (uint32_t n = 0; n < tx.outputs.size(); ++n)
            working.add({id, n}, tx.outputs[n]);
    }

    Amount coinbase_total = 0;
    for (const auto& out : coinbase.outputs)
        if (add_overflows(coinbase_total, out.amount, &coinbase_total))
            return block_fail(BlockError::BadCoinbase, "coinbase sum overflow");
    Amount allowed = 0;
    if (add_overflows(block_reward, result.total_fees, &allowed))
        return block_fail(BlockError::BadCoinbase, "reward sum overflow");
    if (coinbase_total > allowed)
        return block_fail(BlockError::BadCoinbase,
                          "coinbase pays " + std::to_string(coinbase_total) + ", allowed " +
                              std::to_string(allowed));

    return result;
}

} // namespace chainlab::ledger
