#pragma once

#include <array>
#include <cstring>

#include "common.hpp"

namespace agiopp {

using Digest = std::array<u8, 32>;

// Plain SHA-256 (FIPS 180-4). Self-contained so the commitment layer carries no
// external dependency; throughput is irrelevant at desk scale.
class Sha256 {
  public:
    Sha256() { reset(); }

    void reset() {
        h_ = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
              0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
        len_ = 0;
        buf_fill_ = 0;
    }

    void update(const void* data, size_t n) {
        const u8* p = static_cast<const u8*>(data);
        len_ += n;
        while (n) {
            size_t take = std::min(n, size_t(64) - buf_fill_);
            std::memcpy(buf_ + buf_fill_, p, take);
            buf_fill_ += take;
            p += take;
            n -= take;
            if (buf_fill_ == 64) {
                compress_(buf_);
                buf_fill_ = 0;
            }
        }
    }

    Digest final() {
        u64 bits = len_ * 8;
        u8 pad = 0x80;
        update(&pad, 1);
        u8 z = 0;
        while (buf_fill_ != 56) update(&z, 1);
        u8 lenb[8];
        for (int i = 0; i < 8; ++i) lenb[i] = u8(bits >> (56 - 8 * i));
        update(lenb, 8);
        Digest d;
        for (int i = 0; i < 8; ++i) {
            d[4 * i + 0] = u8(h_[i] >> 24);
            d[4 * i + 1] = u8(h_[i] >> 16);
            d[4 * i + 2] = u8(h_[i] >> 8);
            d[4 * i + 3] = u8(h_[i]);
        }
        return d;
    }

    static Digest hash(const void* data, size_t n) {
        Sha256 s;
        s.update(data, n);
        return s.final();
    }

  private:
    std::array<u32, 8> h_;
    u8 buf_[64];
    size_t buf_fill_ = 0;
    u64 len_ = 0;

    static u32 rotr_(u32 x, int n) { return (x >> n) | (x << (32 - n)); }

    void compress_(const u8* p) {
        static const u32 K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
            0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
            0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
            0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
            0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
            0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
            0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
        u32 w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (u32(p[4 * i]) << 24) | (u32(p[4 * i + 1]) << 16) | (u32(p[4 * i + 2]) << 8) | u32(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            u32 s0 = rotr_(w[i - 15], 7) ^ rotr_(w[i - 15], 18) ^ (w[i - 15] >> 3);
            u32 s1 = rotr_(w[i - 2], 17) ^ rotr_(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        u32 a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4], f = h_[5], g = h_[6], h = h_[7];
        for (int i = 0; i < 64; ++i) {
            u32 S1 = rotr_(e, 6) ^ rotr_(e, 11) ^ rotr_(e, 25);
            u32 ch = (e & f) ^ (~e & g);
            u32 t1 = h + S1 + ch + K[i] + w[i];
            u32 S0 = rotr_(a, 2) ^ rotr_(a, 13) ^ rotr_(a, 22);
            u32 maj = (a & b) ^ (a & c) ^ (b & c);
            u32 t2 = S0 + maj;
            h = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h_[0] += a; h_[1] += b; h_[2] += c; h_[3] += d;
        h_[4] += e; h_[5] += f; h_[6] += g; h_[7] += h;
    }
};

inline std::string hex(const Digest& d) {
    static const char* t = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (u8 b : d) {
        s.push_back(t[b >> 4]);
        s.push_back(t[b & 15]);
    }
    return s;
}

}  // namespace agiopp
