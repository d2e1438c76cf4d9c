// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace chainlab {

/// Fixed-length 32-byte digest. All block, transaction and commitment
/// identities in the ledger are digests produced by sha256().
struct Digest {
    std::array<uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;
    bool is_zero() const;
    std::string hex() const;
    static std::optional<Digest> from_hex(std::string_view hex);
};

namespace crypto {

/// Incremental SHA-256 (FIPS 180-4). The scalar compression function is the
/// reference kernel; batch hashing may run on a SIMD kernel, see sha256_batch8.
class Sha256 {
public:
    Sha256();
    Sha256& update(const void* data, size_t len);
    Sha256& update(std::span<const uint8_t> data);
    Digest finish();
    void reset();

private:
    uint32_t state_[8];
    uint8_t buf_[64];
    uint64_t total_len_ = 0;
    size_t buf_len_ = 0;
};

Digest sha256(std::span<const uint8_t> data);
Digest sha256(std::string_view data);

/// Hashes eight equal-length messages at once. Dispatches at runtime to the
/// widest kernel the CPU supports; results are bit-identical to eight calls
/// of sha256().
void sha256_batch8(const uint8_t* const msgs[8], size_t len, Digest out[8]);

/// Name of the batch kernel selected at runtime ("avx2" or "scalar").
const char* sha256_backend();

/// Leading zero bits of a digest, scanning from byte 0 MSB-first.
/// This is the proof-of-work metric: a header digest qualifies at
/// difficulty d iff leading_zero_bits(digest) >= d.
unsigned leading_zero_bits(const Digest& d);

namespace detail {
void sha256_batch8_scalar(const uint8_t* const msgs[8], size_t len, Digest out[8]);
#if CHAINLAB_HAVE_AVX2_KERNEL
void sha256_batch8_avx2(const uint8_t* const msgs[8], size_t len, Digest out[8]);
bool avx2_supported();
#endif
} // namespace detail

} // namespace crypto
} // namespace chainlab
