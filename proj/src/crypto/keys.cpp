// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chainlab/crypto/keys.h"

#include <sodium.h>
#include <sys/stat.h>

#include <fstream>
#include <stdexcept>

#include "chainlab/util/hex.h"

namespace chainlab::crypto {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0)
        throw std::runtime_error("libsodium initialization failed");
}

// libsodium's ed25519 secret key is seed || public key.
std::array<uint8_t, crypto_sign_SECRETKEYBYTES> expand(const PrivateKey& sk) {
    ensure_sodium();
    std::array<uint8_t, crypto_sign_SECRETKEYBYTES> full;
    std::array<uint8_t, crypto_sign_PUBLICKEYBYTES> pk;
    crypto_sign_seed_keypair(pk.data(), full.data(), sk.seed.data());
    return full;
}

} // namespace

std::string PublicKey::hex() const { return to_hex(bytes); }

std::optional<PublicKey> PublicKey::from_hex(std::string_view hex) {
    auto raw = chainlab::from_hex(hex);
    if (!raw || raw->size() != 32)
        return std::nullopt;
    PublicKey pk;
    std::copy(raw->begin(), raw->end(), pk.bytes.begin());
    return pk;
}

KeyPair generate_keypair() {
    ensure_sodium();
    PrivateKey sk;
    randombytes_buf(sk.seed.data(), sk.seed.size());
    KeyPair kp;
    kp.private_key = sk;
    kp.public_key = derive_public_key(sk);
    return kp;
}

KeyPair generate_keypair(std::span<const uint8_t, 32> seed) {
    PrivateKey sk;
    std::copy(seed.begin(), seed.end(), sk.seed.begin());
    KeyPair kp;
    kp.private_key = sk;
    kp.public_key = derive_public_key(sk);
    return kp;
}

PublicKey derive_public_key(const PrivateKey& sk) {
    ensure_sodium();
    PublicKey pk;
    std::array<uint8_t, crypto_sign_SECRETKEYBYTES> full;
    crypto_sign_seed_keypair(pk.bytes.data(), full.data(), sk.seed.data());
    return pk;
}

Signature sign(const PrivateKey& sk, std::span<const uint8_t> message) {
    auto full = expand(sk);
    Signature sig;
    unsigned long long sig_len = 0;
    crypto_sign_detached(sig.bytes.data(), &sig_len, message.data(), message.size(), full.data());
    return sig;
}

bool verify(const PublicKey& pk, std::span<const uint8_t> message, const Signature& sig) {
    ensure_sodium();
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                       pk.bytes.data()) == 0;
}

void write_key_file(const std::filesystem::path& path, std::span<const PrivateKey> keys) {
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open key file for writing: " + path.string());
        for (const auto& k : keys)
            out << to_hex(k.seed) << "\n";
    }
    ::chmod(path.c_str(), S_IRUSR | S_IWUSR);
}

std::vector<PrivateKey> read_key_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open key file: " + path.string());
    std::vector<PrivateKey> keys;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto raw = chainlab::from_hex(line);
        if (!raw || raw->size() != 32)
            throw std::runtime_error("malformed key at " + path.string() + ":" +
                                     std::to_string(line_no));
        PrivateKey sk;
        std::copy(raw->begin(), raw->end(), sk.seed.begin());
        keys.push_back(sk);
    }
    return keys;
}

} // namespace chainlab::crypto
