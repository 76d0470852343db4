#pragma once

#include "field.hpp"
#include "sha256.hpp"

namespace agiopp {

// Deterministic public-coin source for the interactive simulation: splitmix64
// stream keyed by the seed. Field elements and indices are drawn by rejection
// so they are exactly uniform.
class Coins {
  public:
    explicit Coins(u64 seed) : state_(seed) {}

    u64 next_u64() {
        u64 z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    u128 next_bits(unsigned bits) {
        u128 v = 0;
        unsigned got = 0;
        while (got < bits) {
            v = (v << 64) | next_u64();
            got += 64;
        }
        if (bits < 128) v &= (u128(1) << bits) - 1;
        return v;
    }

    Fe field_element(const Field& F) {
        unsigned b = F.bits();
        for (;;) {
            u128 v = next_bits(b);
            if (v < F.cardinality()) return F.element(v);
        }
    }

    u64 index(u64 n) {
        require(n > 0, "coins: empty range");
        unsigned b = 64 - __builtin_clzll(n);
        for (;;) {
            u64 v = u64(next_bits(b));
            if (v < n) return v;
        }
    }

  private:
    u64 state_;
};

// Fiat-Shamir channel: a SHA-256 sponge. absorb() mixes transcript data into the
// state; squeeze draws are counter-mode hashes of the current state, and each
// draw also advances the state so later challenges depend on earlier ones.
class FsChannel {
  public:
    FsChannel() { state_.fill(0); }

    void absorb(const void* data, size_t n) {
        Sha256 h;
        h.update(state_.data(), state_.size());
        h.update(data, n);
        state_ = h.final();
        counter_ = 0;
    }
    void absorb_digest(const Digest& d) { absorb(d.data(), d.size()); }

    u64 squeeze_u64() {
        Digest d = next_block_();
        u64 v = 0;
        for (int i = 0; i < 8; ++i) v |= u64(d[i]) << (8 * i);
        return v;
    }

    u128 squeeze_bits(unsigned bits) {
        u128 v = 0;
        unsigned got = 0;
        while (got < bits) {
            v = (v << 64) | squeeze_u64();
            got += 64;
        }
        if (bits < 128) v &= (u128(1) << bits) - 1;
        return v;
    }

    Fe squeeze_field(const Field& F) {
        unsigned b = F.bits();
        for (;;) {
            u128 v = squeeze_bits(b);
            if (v < F.cardinality()) return F.element(v);
        }
    }

    u64 squeeze_index(u64 n) {
        require(n > 0, "fs: empty range");
        unsigned b = 64 - __builtin_clzll(n);
        for (;;) {
            u64 v = u64(squeeze_bits(b));
            if (v < n) return v;
        }
    }

  private:
    Digest state_;
    u64 counter_ = 0;

    Digest next_block_() {
        Sha256 h;
        h.update(state_.data(), state_.size());
        u8 ctr[8];
        for (int i = 0; i < 8; ++i) ctr[i] = u8(counter_ >> (8 * i));
        h.update(ctr, 8);
        ++counter_;
        return h.final();
    }
};

}  // namespace agiopp
