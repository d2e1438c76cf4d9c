// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Eight-lane SHA-256: one __m256i holds the same working variable for eight
// independent messages. Used by the nonce grind, where eight header
// candidates differ only in the nonce field. Must stay bit-identical to the
// scalar kernel in sha256.cpp; tests/test_sha256.cpp enforces this.

#include "chainlab/crypto/sha256.h"

#if CHAINLAB_HAVE_AVX2_KERNEL

#include <immintrin.h>

#include <cstring>
#include <vector>

namespace chainlab::crypto::detail {

namespace {

constexpr uint32_t kInit[8] = {
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
};

constexpr uint32_t kRound[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
};

inline __m256i rotr(__m256i x, int n) {
    return _mm256_or_si256(_mm256_srli_epi32(x, n), _mm256_slli_epi32(x, 32 - n));
}

inline __m256i big_sigma0(__m256i x) {
    return _mm256_xor_si256(rotr(x, 2), _mm256_xor_si256(rotr(x, 13), rotr(x, 22)));
}

inline __m256i big_sigma1(__m256i x) {
    return _mm256_xor_si256(rotr(x, 6), _mm256_xor_si256(rotr(x, 11), rotr(x, 25)));
}

inline __m256i small_sigma0(__m256i x) {
    return _mm256_xor_si256(rotr(x, 7), _mm256_xor_si256(rotr(x, 18), _mm256_srli_epi32(x, 3)));
}

inline __m256i small_sigma1(__m256i x) {
    return _mm256_xor_si256(rotr(x, 17), _mm256_xor_si256(rotr(x, 19), _mm256_srli_epi32(x, 10)));
}

inline __m256i ch(__m256i e, __m256i f, __m256i g) {
    return _mm256_xor_si256(_mm256_and_si256(e, f), _mm256_andnot_si256(e, g));
}

inline __m256i maj(__m256i a, __m256i b, __m256i c) {
    return _mm256_xor_si256(_mm256_and_si256(a, b),
                            _mm256_xor_si256(_mm256_and_si256(a, c), _mm256_and_si256(b, c)));
}

inline uint32_t load_be32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

// Word t of the current 64-byte block, one lane per message.
inline __m256i gather_word(const uint8_t* const lanes[8], size_t block_off, int t) {
    return _mm256_set_epi32(
        int(load_be32(lanes[7] + block_off + 4 * t)), int(load_be32(lanes[6] + block_off + 4 * t)),
        int(load_be32(lanes[5] + block_off + 4 * t)), int(load_be32(lanes[4] + block_off + 4 * t)),
        int(load_be32(lanes[3] + block_off + 4 * t)), int(load_be32(lanes[2] + block_off + 4 * t)),
        int(load_be32(lanes[1] + block_off + 4 * t)), int(load_be32(lanes[0] + block_off + 4 * t)));
}

} // namespace

bool avx2_supported() {
    return __builtin_cpu_supports("avx2");
}

void sha256_batch8_avx2(const uint8_t* const msgs[8], size_t len, Digest out[8]) {
    // Pad each lane into one contiguous buffer, all lanes the same length.
    const size_t padded = ((len + 1 + 8 + 63) / 64) * 64;
    std::vector<uint8_t> buf(8 * padded, 0);
    const uint64_t bit_len = uint64_t(len) * 8;
    const uint8_t* lanes[8];
    for (int i = 0; i < 8; ++i) {
        uint8_t* lane = buf.data() + i * padded;
        std::memcpy(lane, msgs[i], len);
        lane[len] = 0x80;
        for (int b = 0; b < 8; ++b)
            lane[padded - 8 + b] = uint8_t(bit_len >> (56 - 8 * b));
        lanes[i] = lane;
    }

    __m256i state[8];
    for (int i = 0; i < 8; ++i)
        state[i] = _mm256_set1_epi32(int(kInit[i]));

    for (size_t off = 0; off < padded; off += 64) {
        __m256i w[64];
        for (int t = 0; t < 16; ++t)
            w[t] = gather_word(lanes, off, t);
        for (int t = 16; t < 64; ++t)
            w[t] = _mm256_add_epi32(
                _mm256_add_epi32(small_sigma1(w[t - 2]), w[t - 7]),
                _mm256_add_epi32(small_sigma0(w[t - 15]), w[t - 16]));

        __m256i a = state[0], b = state[1], c = state[2], d = state[3];
        __m256i e = state[4], f = state[5], g = state[6], h = state[7];
        for (int t = 0; t < 64; ++t) {
            __m256i t1 = _mm256_add_epi32(
                _mm256_add_epi32(h, big_sigma1(e)),
                _mm256_add_epi32(ch(e, f, g),
                                 _mm256_add_epi32(_mm256_set1_epi32(int(kRound[t])), w[t])));
            __m256i t2 = _mm256_add_epi32(big_sigma0(a), maj(a, b, c));
            h = g;
            g = f;
            f = e;
            e = _mm256_add_epi32(d, t1);
            d = c;
            c = b;
            b = a;
            a = _mm256_add_epi32(t1, t2);
        }
        state[0] = _mm256_add_epi32(state[0], a);
        state[1] = _mm256_add_epi32(state[1], b);
        state[2] = _mm256_add_epi32(state[2], c);
        state[3] = _mm256_add_epi32(state[3], d);
        state[4] = _mm256_add_epi32(state[4], e);
        state[5] = _mm256_add_epi32(state[5], f);
        state[6] = _mm256_add_epi32(state[6], g);
        state[7] = _mm256_add_epi32(state[7], h);
    }

    alignas(32) uint32_t words[8][8];
    for (int i = 0; i < 8; ++i)
        _mm256_store_si256(reinterpret_cast<__m256i*>(words[i]), state[i]);
    // words[i][lane] is state word i of message `lane`.
    for (int lane = 0; lane < 8; ++lane) {
        for (int i = 0; i < 8; ++i) {
            uint32_t v = words[i][lane];
            out[lane].bytes[4 * i + 0] = uint8_t(v >> 24);
            out[lane].bytes[4 * i + 1] = uint8_t(v >> 16);
            out[lane].bytes[4 * i + 2] = uint8_t(v >> 8);
            out[lane].bytes[4 * i + 3] = uint8_t(v);
        }
    }
}

} // namespace chainlab::crypto::detail

#endif // CHAINLAB_HAVE_AVX2_KERNEL
