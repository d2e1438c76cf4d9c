// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chainlab::crypto {

/// Ed25519 with fixed-length encodings: 32-byte public keys, 32-byte private
/// seeds, 64-byte detached signatures. The public key is deterministically
/// derivable from the private seed.
struct PublicKey {
    std::array<uint8_t, 32> bytes{};
    auto operator<=>(const PublicKey&) const = default;
    std::string hex() const;
    static std::optional<PublicKey> from_hex(std::string_view hex);
};

struct PrivateKey {
    std::array<uint8_t, 32> seed{};
    bool operator==(const PrivateKey&) const = default;
};

struct Signature {
    std::array<uint8_t, 64> bytes{};
    auto operator<=>(const Signature&) const = default;
};

struct KeyPair {
    PublicKey public_key;
    PrivateKey private_key;
};

/// Fresh pair from system randomness.
KeyPair generate_keypair();

/// Deterministic pair from a 32-byte seed. Same seed, same pair.
KeyPair generate_keypair(std::span<const uint8_t, 32> seed);

PublicKey derive_public_key(const PrivateKey& sk);

Signature sign(const PrivateKey& sk, std::span<const uint8_t> message);
bool verify(const PublicKey& pk, std::span<const uint8_t> message, const Signature& sig);

/// Key files hold one 64-hex-character private key per line. Written with
/// owner-only permissions.
void write_key_file(const std::filesystem::path& path, std::span<const PrivateKey> keys);
std::vector<PrivateKey> read_key_file(const std::filesystem::path& path);

} // namespace chainlab::crypto
