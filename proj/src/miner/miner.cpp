// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/miner/miner.h"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <set>
#include <stdexcept>
#include <thread>

namespace chainlab::miner {

using namespace ledger;

namespace {

void atomic_min(std::atomic<uint64_t>& target, uint64_t value) {
    uint64_t cur = target.load(std::memory_order_relaxed);
    while (value < cur &&
           !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
    }
}

void patch_nonce(uint8_t* header_bytes, uint64_t nonce) {
    for (int i = 0; i < 8; ++i)
        header_bytes[kHeaderNonceOffset + i] = uint8_t(nonce >> (56 - 8 * i));
}

// Ascending scan of [first, last] for the chunk's first qualifying nonce,
// eight candidates per hash batch. `best` lets workers on higher chunks bail
// out once a lower nonce is known; a worker never skips a position smaller
// than any already-found nonce, so the global minimum is exact.
std::optional<uint64_t> scan_chunk(const std::array<uint8_t, kHeaderSize>& base, uint64_t first,
                                   uint64_t last, uint32_t difficulty_bits,
                                   std::atomic<uint64_t>& best) {
    uint8_t bufs[8][kHeaderSize];
    const uint8_t* ptrs[8];
    for (int i = 0; i < 8; ++i) {
        std::memcpy(bufs[i], base.data(), kHeaderSize);
        ptrs[i] = bufs[i];
    }

    uint64_t n = first;
    while (true) {
        if (best.load(std::memory_order_relaxed) < n)
            return std::nullopt;
        const uint64_t left_minus1 = last - n;
        const unsigned lanes = left_minus1 >= 7 ? 8 : unsigned(left_minus1) + 1;
        for (unsigned i = 0; i < lanes; ++i)
            patch_nonce(bufs[i], n + i);
        for (unsigned i = lanes; i < 8; ++i)
            patch_nonce(bufs[i], n); // idle lanes re-hash the batch base

        Digest out[8];
        crypto::sha256_batch8(ptrs, kHeaderSize, out);
        for (unsigned i = 0; i < lanes; ++i) {
            if (crypto::leading_zero_bits(out[i]) >= difficulty_bits) {
                atomic_min(best, n + i);
                return n + i;
            }
        }
        if (lanes > left_minus1) // covered through `last`
            return std::nullopt;
        n += lanes;
    }
}

struct FeeRate {
    Amount fee;
    size_t size;
    // fee_a/size_a > fee_b/size_b without division.
    bool richer_than(const FeeRate& other) const {
        return static_cast<__int128>(fee) * other.size > static_cast<__int128>(other.fee) * size;
    }
    bool equal_rate(const FeeRate& other) const {
        return static_cast<__int128>(fee) * other.size == static_cast<__int128>(other.fee) * size;
    }
};

} // namespace

MiningOutcome mine(const MiningJob& job, uint32_t difficulty_bits, unsigned workers) {
    if (difficulty_bits > 40)
        throw std::invalid_argument("difficulty_bits above 40 is not searchable at desk scale");
    if (job.nonce_last < job.nonce_first)
        throw std::invalid_argument("empty nonce range");
    if (workers == 0)
        workers = 1;

    const auto base = encode_header(job.header);
    std::atomic<uint64_t> best{UINT64_MAX};

    std::vector<std::optional<uint64_t>> results(workers);
    if (workers == 1) {
        results[0] = scan_chunk(base, job.nonce_first, job.nonce_last, difficulty_bits, best);
    } else {
        // 128-bit arithmetic: the full inclusive range does not fit in u64.
        const __int128 first = job.nonce_first;
        const __int128 last = job.nonce_last;
        const __int128 total = last - first + 1;
        const __int128 chunk = (total + workers - 1) / workers;
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            const __int128 cf = first + chunk * w;
            if (cf > last) {
                results[w] = std::nullopt;
                continue;
            }
            const __int128 cl = std::min(last, cf + chunk - 1);
            threads.emplace_back([&, w, cf, cl] {
                results[w] =
                    scan_chunk(base, uint64_t(cf), uint64_t(cl), difficulty_bits, best);
            });
        }
        for (auto& t : threads)
            t.join();
    }

    MiningOutcome outcome;
    for (const auto& r : results)
        if (r && (!outcome.nonce || *r < *outcome.nonce))
            outcome.nonce = r;

    if (outcome.nonce) {
        outcome.trials = *outcome.nonce - job.nonce_first + 1;
    } else {
        const uint64_t span = job.nonce_last - job.nonce_first;
        outcome.trials = span == UINT64_MAX ? UINT64_MAX : span + 1;
    }
    return outcome;
}

Block assemble_template(const Mempool& mempool, const Digest& parent_digest,
                        uint64_t parent_height, Amount reward, uint32_t difficulty_bits,
                        const crypto::PublicKey& coinbase_key, size_t max_txs) {
    struct Candidate {
        const Mempool::Entry* entry;
        Digest id;
    };
    std::vector<Candidate> remaining;
    for (const auto& [id, e] : mempool.entries())
        remaining.push_back({&e, id});

    std::set<Digest> pool_ids;
    for (const auto& c : remaining)
        pool_ids.insert(c.id);

    std::vector<Transaction> chosen;
    std::set<Digest> chosen_ids;
    Amount total_fees = 0;

    while (chosen.size() < max_txs) {
        // A candidate is ready when every in-pool parent is already chosen.
        const Candidate* pick = nullptr;
        for (const auto& c : remaining) {
            if (chosen_ids.count(c.id))
                continue;
            bool ready = true;
            for (const auto& in : c.entry->tx.inputs) {
                if (pool_ids.count(in.source.txid) && !chosen_ids.count(in.source.txid)) {
                    ready = false;
                    break;
                }
            }
            if (!ready)
                continue;
            if (!pick) {
                pick = &c;
                continue;
            }
            FeeRate a{c.entry->fee, c.entry->size};
            FeeRate b{pick->entry->fee, pick->entry->size};
            if (a.richer_than(b) || (a.equal_rate(b) && c.id < pick->id))
                pick = &c;
        }
        if (!pick)
            break;
        chosen_ids.insert(pick->id);
        chosen.push_back(pick->entry->tx);
        total_fees += pick->entry->fee;
    }

    Block block;
    Transaction coinbase;
    coinbase.coinbase_height = parent_height + 1;
    coinbase.outputs.push_back({reward + total_fees, coinbase_key});
    block.transactions.push_back(std::move(coinbase));
    for (auto& tx : chosen)
        block.transactions.push_back(std::move(tx));

    block.header.prev_digest = parent_digest;
    block.header.tx_commitment = tx_commitment(block.transactions);
    block.header.nonce = 0;
    block.header.difficulty_bits = difficulty_bits;
    block.header.height = parent_height + 1;
    return block;
}

} // namespace chainlab::miner
