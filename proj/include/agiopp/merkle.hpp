#pragma once

#include "field.hpp"
#include "sha256.hpp"

namespace agiopp {

// Binary Merkle tree over an oracle table. Leaf hashes are domain-separated by
// oracle (level) index and position, so two tables never share a root by layout
// accident. Leaf count is padded to a power of two with hashes of an empty leaf.
class MerkleTree {
  public:
    MerkleTree() = default;

    MerkleTree(const Field& F, u32 oracle_index, const std::vector<Fe>& table) {
        n_ = table.size();
        require(n_ >= 1, "merkle: empty table");
        size_t cap = 1;
        while (cap < n_) cap <<= 1;
        leaves_ = cap;
        nodes_.assign(2 * cap, Digest{});
        std::vector<u8> buf(1 + 4 + 8 + F.byte_len());
        for (size_t i = 0; i < cap; ++i) {
            buf[0] = 0x00;  // leaf tag
            for (int b = 0; b < 4; ++b) buf[1 + b] = u8(oracle_index >> (8 * b));
            u64 idx = i;
            for (int b = 0; b < 8; ++b) buf[5 + b] = u8(idx >> (8 * b));
            if (i < n_)
                F.write(table[i], buf.data() + 13);
            else
                std::memset(buf.data() + 13, 0xff, F.byte_len());
            nodes_[cap + i] = Sha256::hash(buf.data(), buf.size());
        }
        for (size_t i = cap; i-- > 1;) nodes_[i] = hash_pair(nodes_[2 * i], nodes_[2 * i + 1]);
    }

    const Digest& root() const { return nodes_[1]; }
    size_t size() const { return n_; }
    size_t depth() const {
        size_t d = 0, c = leaves_;
        while (c > 1) { c >>= 1; ++d; }
        return d;
    }

    // Authentication path: sibling hashes from leaf level to the root.
    std::vector<Digest> open(size_t index) const {
        require(index < n_, "merkle: open index out of range");
        std::vector<Digest> path;
        size_t pos = leaves_ + index;
        while (pos > 1) {
            path.push_back(nodes_[pos ^ 1]);
            pos >>= 1;
        }
        return path;
    }

    static Digest leaf_hash(const Field& F, u32 oracle_index, u64 index, Fe value) {
        std::vector<u8> buf(1 + 4 + 8 + F.byte_len());
        buf[0] = 0x00;
        for (int b = 0; b < 4; ++b) buf[1 + b] = u8(oracle_index >> (8 * b));
        for (int b = 0; b < 8; ++b) buf[5 + b] = u8(index >> (8 * b));
        F.write(value, buf.data() + 13);
        return Sha256::hash(buf.data(), buf.size());
    }

    static Digest hash_pair(const Digest& a, const Digest& b) {
        u8 buf[65];
        buf[0] = 0x01;  // node tag
        std::memcpy(buf + 1, a.data(), 32);
        std::memcpy(buf + 33, b.data(), 32);
        return Sha256::hash(buf, 65);
    }

    static bool verify_path(const Field& F, u32 oracle_index, size_t table_size, u64 index, Fe value,
                            const std::vector<Digest>& path, const Digest& root) {
        size_t cap = 1, depth = 0;
        while (cap < table_size) { cap <<= 1; ++depth; }
        if (path.size() != depth || index >= table_size) return false;
        Digest h = leaf_hash(F, oracle_index, index, value);
        size_t pos = cap + index;
        for (const Digest& sib : path) {
            h = (pos & 1) ? hash_pair(sib, h) : hash_pair(h, sib);
            pos >>= 1;
        }
        return h == root;
    }

  private:
    size_t n_ = 0, leaves_ = 0;
    std::vector<Digest> nodes_;
};

}  // namespace agiopp
