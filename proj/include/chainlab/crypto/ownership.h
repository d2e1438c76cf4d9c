// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "chainlab/crypto/keys.h"

namespace chainlab::crypto {

/// Interactive peer-query facility: a verifier sends a fresh random
/// challenge, the holder of the private key answers, anyone can check the
/// answer against the claimed public key. Consensus-level spends use plain
/// transaction signatures instead; this exists for wallet-to-wallet ownership
/// checks.
struct Challenge {
    std::vector<uint8_t> nonce_bytes;
};

struct ChallengeResponse {
    Signature signature;
};

/// Fresh 32-byte random challenge.
Challenge make_challenge();

/// Throws std::invalid_argument on an empty challenge.
ChallengeResponse prove_ownership(const PrivateKey& sk, const Challenge& challenge);

/// True iff the response was produced with the matching private key over
/// exactly this challenge. Empty challenges never verify.
bool verify_ownership(const PublicKey& pk, const Challenge& challenge,
                      const ChallengeResponse& response);

} // namespace chainlab::crypto
