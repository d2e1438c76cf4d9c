// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/crypto/ownership.h"

#include <sodium.h>

#include <stdexcept>

namespace chainlab::crypto {

namespace {

// Domain separation keeps ownership responses from doubling as transaction
// signatures.
constexpr char kTag[] = "chainlab/ownership/v1";

std::vector<uint8_t> tagged(const Challenge& challenge) {
    std::vector<uint8_t> msg(kTag, kTag + sizeof(kTag) - 1);
    msg.insert(msg.end(), challenge.nonce_bytes.begin(), challenge.nonce_bytes.end());
    return msg;
}

} // namespace

Challenge make_challenge() {
    if (sodium_init() < 0)
        throw std::runtime_error("libsodium initialization failed");
    Challenge c;
    c.nonce_bytes.resize(32);
    randombytes_buf(c.nonce_bytes.data(), c.nonce_bytes.size());
    return c;
}

ChallengeResponse prove_ownership(const PrivateKey& sk, const Challenge& challenge) {
    if (challenge.nonce_bytes.empty())
        throw std::invalid_argument("challenge must not be empty");
    return ChallengeResponse{sign(sk, tagged(challenge))};
}

bool verify_ownership(const PublicKey& pk, const Challenge& challenge,
                      const ChallengeResponse& response) {
    if (challenge.nonce_bytes.empty())
        return false;
    return verify(pk, tagged(challenge), response.signature);
}

} // namespace chainlab::crypto
