// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/simnet/wallet.h"

#include "chainlab/ledger/serialize.h"
#include "chainlab/simnet/rng.h"

namespace chainlab::simnet {

using namespace ledger;

Wallet::Wallet(uint64_t seed_base) : seed_base_(seed_base) {}

const crypto::KeyPair& Wallet::fresh_key() {
    std::array<uint8_t, 32> seed{};
    // Four independent 64-bit words per key.
    for (int w = 0; w < 4; ++w) {
        const uint64_t v = mix_seed(seed_base_, next_index_ * 4 + uint64_t(w));
        for (int b = 0; b < 8; ++b)
            seed[size_t(w * 8 + b)] = uint8_t(v >> (56 - 8 * b));
    }
    ++next_index_;
    keys_.push_back(crypto::generate_keypair(std::span<const uint8_t, 32>(seed)));
    owned_.insert(keys_.back().public_key);
    return keys_.back();
}

Amount Wallet::balance(const UtxoSet& utxo) const {
    Amount sum = 0;
    for (const auto& [op, out] : utxo)
        if (owned_.count(out.recipient))
            sum += out.amount;
    return sum;
}

std::optional<Transaction> Wallet::build_payment(const UtxoSet& spendable,
                                                 const crypto::PublicKey& to, Amount amount,
                                                 Amount fee) {
    if (amount <= 0 || fee < 0)
        return std::nullopt;
    const Amount needed = amount + fee;

    // Deterministic coin selection: owned outputs in outpoint order until the
    // target is covered.
    std::vector<std::pair<Outpoint, TxOutput>> picked;
    Amount gathered = 0;
    for (const auto& [op, out] : spendable) {
        if (!owned_.count(out.recipient))
            continue;
        picked.emplace_back(op, out);
        gathered += out.amount;
        if (gathered >= needed)
            break;
    }
    if (gathered < needed)
        return std::nullopt;

    Transaction tx;
    tx.outputs.push_back({amount, to});
    if (gathered > needed)
        tx.outputs.push_back({gathered - needed, fresh_key().public_key});

    for (const auto& [op, out] : picked) {
        TxInput in;
        in.source = op;
        in.spender_key = out.recipient;
        tx.inputs.push_back(in);
    }

    const auto payload = signing_payload(tx);
    for (size_t i = 0; i < tx.inputs.size(); ++i) {
        const crypto::PublicKey& owner = tx.inputs[i].spender_key;
        for (const auto& kp : keys_) {
            if (kp.public_key == owner) {
                tx.inputs[i].signature = crypto::sign(kp.private_key, payload);
                break;
            }
        }
    }
    return tx;
}

} // namespace chainlab::simnet
