#pragma once

#include <algorithm>
#include <array>
#include <cstring>
#include <optional>

#include "common.hpp"

namespace agiopp {

// Field element, canonical form. Layout depends on the owning Field:
//   binary (p=2, k <= 127): polynomial bitmask over F_2, lo = bits 0..63, hi = bits 64..126
//   prime (k=1):            residue in lo
//   quadratic (p odd, k=2): lo + hi*t  with coefficients mod p
struct Fe {
    u64 lo = 0;
    u64 hi = 0;
    friend bool operator==(Fe a, Fe b) { return a.lo == b.lo && a.hi == b.hi; }
    friend bool operator!=(Fe a, Fe b) { return !(a == b); }
    friend bool operator<(Fe a, Fe b) { return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo; }
};

// Field operation counters, for the complexity instrumentation. Thread-local so
// parallel folds do not race; instrumented runs use one worker.
struct OpCounters {
    u64 add = 0, mul = 0, inv = 0;
    u64 total() const { return add + mul + inv; }
};
inline OpCounters& op_counters() {
    thread_local OpCounters c;
    return c;
}
struct OpCountScope {
    OpCounters start;
    OpCountScope() : start(op_counters()) {}
    OpCounters delta() const {
        OpCounters now = op_counters(), d;
        d.add = now.add - start.add;
        d.mul = now.mul - start.mul;
        d.inv = now.inv - start.inv;
        return d;
    }
};

namespace detail {

inline u64 mulmod64(u64 a, u64 b, u64 p) { return u64((u128(a) * b) % p); }

inline u64 powmod64(u64 a, u128 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod64(r, a, p);
        a = mulmod64(a, a, p);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic Miller-Rabin base set for n < 2^64
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod64(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

// carryless 64x64 -> 128 multiply
inline u128 clmul64(u64 a, u64 b) {
    u128 r = 0;
    while (b) {
        u64 low = b & (~b + 1);
        int sh = __builtin_ctzll(b);
        r ^= u128(a) << sh;
        b ^= low;
    }
    return r;
}

struct Bits256 {
    u64 w[4] = {0, 0, 0, 0};
    void xor_shifted(u64 vlo, u64 vhi, int sh) {
        int word = sh >> 6, bit = sh & 63;
        u64 parts[3] = {vlo, vhi, 0};
        if (bit) {
            parts[2] = vhi >> (64 - bit);
            parts[1] = (vhi << bit) | (vlo >> (64 - bit));
            parts[0] = vlo << bit;
        }
        for (int i = 0; i < 3; ++i)
            if (word + i < 4) w[word + i] ^= parts[i];
    }
    int top_bit() const {
        for (int i = 3; i >= 0; --i)
            if (w[i]) return i * 64 + 63 - __builtin_clzll(w[i]);
        return -1;
    }
};

}  // namespace detail

enum class FieldKind { binary, prime, quad };

// A finite field F_{p^k} with a deterministic modulus, holding everything needed
// for arithmetic, enumeration and serialization. Immutable after construction.
class Field {
  public:
    FieldKind kind;
    u64 p = 0;
    unsigned k = 1;
    std::vector<u64> modulus;  // k+1 coefficients over F_p, low -> high, monic (empty for k = 1)

    static Field make(u64 p, unsigned k) {
        require(detail::is_prime_u64(p), "make_field: " + u128_str(p) + " is not prime");
        require(k >= 1, "make_field: extension degree must be >= 1");
        Field F;
        F.p = p;
        F.k = k;
        if (p == 2) {
            require(k <= 127, "make_field: 2^" + std::to_string(k) + " overflows the representation budget");
            F.kind = FieldKind::binary;
            if (k == 1) {
                F.modulus = {0, 1};  // x (placeholder; arithmetic is mod 2 directly)
                F.mod_lo_ = 2;       // bit k set
            } else {
                F.find_binary_modulus_();
            }
        } else if (k == 1) {
            require(p < (u64(1) << 62), "make_field: prime exceeds the representation budget");
            F.kind = FieldKind::prime;
        } else if (k == 2) {
            require(p < (u64(1) << 62), "make_field: p^2 overflows the representation budget");
            F.kind = FieldKind::quad;
            F.find_quad_modulus_();
        } else {
            fail(errc::config, "make_field: p^k overflows the representation budget (odd p supports k <= 2)");
        }
        F.card_ = 1;
        for (unsigned i = 0; i < k; ++i) F.card_ *= p;
        return F;
    }

    u128 cardinality() const { return card_; }
    u128 unit_order() const { return card_ - 1; }
    unsigned bits() const {
        u128 c = card_ - 1;
        unsigned b = 0;
        while (c) { ++b; c >>= 1; }
        return b;
    }
    size_t byte_len() const { return (bits() + 7) / 8; }

    Fe zero() const { return Fe{0, 0}; }
    Fe one() const { return Fe{1, 0}; }
    bool is_zero(Fe a) const { return a.lo == 0 && a.hi == 0; }

    Fe from_uint(u128 v) const {
        switch (kind) {
            case FieldKind::binary: return Fe{u64(v), u64(v >> 64)};
            case FieldKind::prime: return Fe{u64(v % p), 0};
            case FieldKind::quad: {
                u64 c0 = u64(v % p);
                u64 c1 = u64((v / p) % p);
                return Fe{c0, c1};
            }
        }
        return Fe{};
    }
    u128 to_uint(Fe a) const {
        switch (kind) {
            case FieldKind::binary: return (u128(a.hi) << 64) | a.lo;
            case FieldKind::prime: return a.lo;
            case FieldKind::quad: return u128(a.hi) * p + a.lo;
        }
        return 0;
    }
    // index -> element bijection over [0, cardinality)
    Fe element(u128 index) const { return from_uint(index); }

    Fe add(Fe a, Fe b) const {
        ++op_counters().add;
        switch (kind) {
            case FieldKind::binary: return Fe{a.lo ^ b.lo, a.hi ^ b.hi};
            case FieldKind::prime: return Fe{addp_(a.lo, b.lo), 0};
            case FieldKind::quad: return Fe{addp_(a.lo, b.lo), addp_(a.hi, b.hi)};
        }
        return Fe{};
    }
    Fe sub(Fe a, Fe b) const {
        ++op_counters().add;
        switch (kind) {
            case FieldKind::binary: return Fe{a.lo ^ b.lo, a.hi ^ b.hi};
            case FieldKind::prime: return Fe{subp_(a.lo, b.lo), 0};
            case FieldKind::quad: return Fe{subp_(a.lo, b.lo), subp_(a.hi, b.hi)};
        }
        return Fe{};
    }
    Fe neg(Fe a) const {
        switch (kind) {
            case FieldKind::binary: return a;
            case FieldKind::prime: return Fe{a.lo ? p - a.lo : 0, 0};
            case FieldKind::quad: return Fe{a.lo ? p - a.lo : 0, a.hi ? p - a.hi : 0};
        }
        return Fe{};
    }
    Fe mul(Fe a, Fe b) const {
        ++op_counters().mul;
        switch (kind) {
            case FieldKind::binary: return bin_mul_(a, b);
            case FieldKind::prime: return Fe{detail::mulmod64(a.lo, b.lo, p), 0};
            case FieldKind::quad: return quad_mul_(a, b);
        }
        return Fe{};
    }
    Fe inv(Fe a) const {
        require(!is_zero(a), "field: division by zero", errc::config);
        ++op_counters().inv;
        return pow_(a, card_ - 2);
    }
    Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }

    Fe pow(Fe a, u128 e) const { return pow_(a, e); }
    Fe pow_i(Fe a, i64 e) const {
        if (e >= 0) return pow_(a, u128(e));
        return inv(pow_(a, u128(-e)));
    }

    // Multiplicative order of a (a != 0); exact, via factored unit group order.
    // Desk scale only: |F| - 1 is factored by trial division.
    u128 order(Fe a) const {
        require(!is_zero(a), "order: zero element");
        u128 n = unit_order();
        auto fac = factor_u128_(n);
        u128 ord = n;
        for (auto [q, e] : fac) {
            (void)e;
            while (ord % q == 0 && to_uint(pow_(a, ord / q)) == 1) ord /= q;
        }
        return ord;
    }

    // Deterministic element of multiplicative order exactly N.
    // Errors when N does not divide |F| - 1 (the Kummer alphabet constraint).
    Fe primitive_root_of_unity(u128 N) const {
        require(N >= 1, "primitive_root_of_unity: N must be positive");
        u128 n = unit_order();
        require(n % N == 0, "primitive_root_of_unity: N = " + u128_str(N) + " does not divide |F| - 1 = " + u128_str(n));
        if (N == 1) return one();
        auto fac = factor_u128_(N);
        for (u128 idx = 2; idx < card_; ++idx) {
            Fe x = element(idx);
            Fe y = pow_(x, n / N);
            bool ok = to_uint(pow_(y, N)) == 1;
            for (auto [q, e] : fac) {
                (void)e;
                if (!ok) break;
                if (to_uint(pow_(y, N / q)) == 1) ok = false;
            }
            if (ok) return y;
        }
        fail(errc::internal, "primitive_root_of_unity: search exhausted");
    }

    void write(Fe a, u8* out) const {
        u128 v = to_uint(a);
        for (size_t i = 0; i < byte_len(); ++i) out[i] = u8(v >> (8 * i));
    }
    Fe read(const u8* in) const {
        u128 v = 0;
        for (size_t i = 0; i < byte_len(); ++i) v |= u128(in[i]) << (8 * i);
        require(valid_code_(v), "field: serialized element out of range");
        return from_uint_exact_(v);
    }

    std::vector<u8> spec_bytes() const {
        // (p, k, modulus coefficients), little-endian
        std::vector<u8> out;
        auto put64 = [&](u64 v) {
            for (int i = 0; i < 8; ++i) out.push_back(u8(v >> (8 * i)));
        };
        put64(p);
        out.push_back(u8(k));
        out.push_back(u8(k >> 8));
        for (u64 c : modulus) put64(c);
        return out;
    }

    bool same_as(const Field& o) const { return p == o.p && k == o.k && modulus == o.modulus; }

    std::string name() const {
        if (k == 1) return "F_" + u128_str(p);
        return "F_" + u128_str(p) + "^" + std::to_string(k);
    }

  private:
    u128 card_ = 0;
    u64 mod_lo_ = 0, mod_hi_ = 0;  // binary modulus packed (bit i = coeff of x^i)

    u64 addp_(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= p ? s - p : s;
    }
    u64 subp_(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }

    Fe quad_mul_(Fe a, Fe b) const {
        // modulus t^2 + m1 t + m0
        u64 m0 = modulus[0], m1 = modulus[1];
        u64 ll = detail::mulmod64(a.lo, b.lo, p);
        u64 hh = detail::mulmod64(a.hi, b.hi, p);
        u64 cross = addp_(detail::mulmod64(a.lo, b.hi, p), detail::mulmod64(a.hi, b.lo, p));
        // t^2 = -m1 t - m0
        u64 c0 = subp_(ll, detail::mulmod64(hh, m0, p));
        u64 c1 = subp_(cross, detail::mulmod64(hh, m1, p));
        return Fe{c0, c1};
    }

    Fe bin_mul_(Fe a, Fe b) const {
        using detail::clmul64;
        u128 z0 = clmul64(a.lo, b.lo);
        u128 z1 = clmul64(a.lo, b.hi) ^ clmul64(a.hi, b.lo);
        u128 z2 = clmul64(a.hi, b.hi);
        detail::Bits256 r;
        r.w[0] = u64(z0);
        r.w[1] = u64(z0 >> 64) ^ u64(z1);
        r.w[2] = u64(z1 >> 64) ^ u64(z2);
        r.w[3] = u64(z2 >> 64);
        int deg = int(k);
        for (int b_ = r.top_bit(); b_ >= deg; b_ = r.top_bit()) r.xor_shifted(mod_lo_, mod_hi_, b_ - deg);
        return Fe{r.w[0], r.w[1]};
    }

    Fe pow_(Fe a, u128 e) const {
        Fe r = one(), x = a;
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }

    bool valid_code_(u128 v) const {
        switch (kind) {
            case FieldKind::binary: return v < card_;
            case FieldKind::prime: return v < p;
            case FieldKind::quad: return v < card_;
        }
        return false;
    }
    Fe from_uint_exact_(u128 v) const { return from_uint(v); }

    static std::vector<std::pair<u128, int>> factor_u128_(u128 n) {
        std::vector<std::pair<u128, int>> fac;
        for (u128 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
            if (n % q == 0) {
                int e = 0;
                while (n % q == 0) { n /= q; ++e; }
                fac.push_back({q, e});
            }
        }
        if (n > 1) fac.push_back({n, 1});
        return fac;
    }

    // ---- binary modulus selection: lowest code irreducible polynomial of degree k ----

    // square a packed poly of degree < k modulo the candidate modulus (degree k)
    static u128 bin_sqmod_(u128 a, u128 mod, unsigned k) {
        // spread bits: deg <= 2k-2 < 254
        detail::Bits256 r;
        for (unsigned i = 0; i < k; ++i)
            if ((a >> i) & 1) {
                unsigned pos = 2 * i;
                r.w[pos >> 6] ^= u64(1) << (pos & 63);
            }
        u64 mlo = u64(mod), mhi = u64(mod >> 64);
        for (int b = r.top_bit(); b >= int(k); b = r.top_bit()) r.xor_shifted(mlo, mhi, b - int(k));
        return (u128(r.w[1]) << 64) | r.w[0];
    }
    static u128 bin_mulmod_(u128 a, u128 b, u128 mod, unsigned k) {
        detail::Bits256 r;
        u64 alo = u64(a), ahi = u64(a >> 64);
        for (unsigned i = 0; i < k; ++i)
            if ((b >> i) & 1) r.xor_shifted(alo, ahi, int(i));
        u64 mlo = u64(mod), mhi = u64(mod >> 64);
        for (int bb = r.top_bit(); bb >= int(k); bb = r.top_bit()) r.xor_shifted(mlo, mhi, bb - int(k));
        return (u128(r.w[1]) << 64) | r.w[0];
    }
    static u128 bin_gcd_(u128 a, u128 b) {
        auto topbit = [](u128 v) -> int {
            u64 hi = u64(v >> 64);
            if (hi) return 64 + 63 - __builtin_clzll(hi);
            u64 lo = u64(v);
            if (lo) return 63 - __builtin_clzll(lo);
            return -1;
        };
        while (b) {
            int da = topbit(a), db = topbit(b);
            if (da < db) { std::swap(a, b); continue; }
            a ^= b << (da - db);
        }
        return a;
    }
    static bool bin_irreducible_(u128 mod, unsigned k) {
        // x^(2^k) == x mod f, and gcd(x^(2^(k/r)) - x, f) == 1 for prime r | k
        u128 x = 2;  // the polynomial x
        u128 t = x;
        for (unsigned i = 0; i < k; ++i) t = bin_sqmod_(t, mod, k);
        if (t != x) return false;
        unsigned kk = k;
        std::vector<unsigned> primes;
        for (unsigned q = 2; q * q <= kk; ++q)
            if (kk % q == 0) {
                primes.push_back(q);
                while (kk % q == 0) kk /= q;
            }
        if (kk > 1) primes.push_back(kk);
        for (unsigned r : primes) {
            u128 s = x;
            for (unsigned i = 0; i < k / r; ++i) s = bin_sqmod_(s, mod, k);
            if (bin_gcd_(s ^ x, mod) != 1) return false;
        }
        return true;
    }
    void find_binary_modulus_() {
        // candidates: monic degree-k, enumerated by numeric code; constant term must be 1
        for (u128 low = 1;; low += 2) {
            require(low < (u128(1) << k), "no irreducible modulus found", errc::internal);
            u128 cand = (u128(1) << k) | low;
            if (bin_irreducible_(cand, k)) {
                mod_lo_ = u64(cand);
                mod_hi_ = u64(cand >> 64);
                modulus.assign(k + 1, 0);
                for (unsigned i = 0; i <= k; ++i) modulus[i] = u64((cand >> i) & 1);
                return;
            }
        }
    }

    void find_quad_modulus_() {
        // lowest-code monic irreducible t^2 + c1 t + c0 over F_p:
        // irreducible iff disc = c1^2 - 4 c0 is a non-residue
        for (u64 code = 1;; ++code) {
            u64 c0 = code % p, c1 = u64(code / p);
            require(c1 < p, "no irreducible quadratic found", errc::internal);
            if (c0 == 0) continue;
            u64 disc = detail::mulmod64(c1, c1, p);
            u64 f = detail::mulmod64(4 % p, c0, p);
            disc = disc >= f ? disc - f : disc + p - f;
            bool nonres;
            if (disc == 0)
                nonres = false;
            else
                nonres = detail::powmod64(disc, (p - 1) / 2, p) == p - 1;
            if (nonres) {
                modulus = {c0, c1, 1};
                return;
            }
        }
    }
};

// Subfield embedding F -> E for binary fields with deg(F) | deg(E): maps the
// F-generator to the lexicographically smallest root of F's modulus in E.
class FieldEmbedding {
  public:
    const Field* from;
    const Field* to;

    FieldEmbedding(const Field& F, const Field& E) : from(&F), to(&E) {
        if (F.same_as(E)) { identity_ = true; return; }
        require(F.kind == FieldKind::binary && E.kind == FieldKind::binary,
                "field embedding: only binary subfield embeddings are supported");
        require(E.k % F.k == 0, "field embedding: " + F.name() + " is not a subfield of " + E.name());
        // The copy of F inside E is the kernel of x -> x^(2^m) + x, an F_2-linear
        // map on E. Compute a kernel basis, enumerate the 2^m subfield elements,
        // and take the smallest root of F's modulus as the generator image.
        unsigned m = F.k, M = E.k;
        std::vector<u128> cols(M);
        for (unsigned i = 0; i < M; ++i) {
            Fe b = E.from_uint(u128(1) << i);
            Fe fr = b;
            for (unsigned s = 0; s < m; ++s) fr = E.mul(fr, fr);
            cols[i] = E.to_uint(E.add(fr, b));
        }
        // kernel of the column map over F_2 (xor basis with combination tracking)
        std::vector<u128> basis_v(M, 0), basis_c(M, 0);
        std::vector<u128> kernel;
        for (unsigned i = 0; i < M; ++i) {
            u128 v = cols[i], c = u128(1) << i;
            bool inserted = false;
            for (int bit = int(M) - 1; bit >= 0; --bit) {
                if (!((v >> bit) & 1)) continue;
                if (basis_v[bit] == 0) {
                    basis_v[bit] = v;
                    basis_c[bit] = c;
                    inserted = true;
                    break;
                }
                v ^= basis_v[bit];
                c ^= basis_c[bit];
            }
            if (!inserted && v == 0) kernel.push_back(c);
        }
        require(kernel.size() == m, "field embedding: unexpected subfield dimension", errc::internal);
        Fe root{};
        bool found = false;
        u128 best = 0;
        for (u128 mask = 0; mask < (u128(1) << m); ++mask) {
            u128 code = 0;
            for (unsigned i = 0; i < m; ++i)
                if ((mask >> i) & 1) code ^= kernel[i];
            Fe x = E.from_uint(code);
            Fe acc = E.zero(), xp = E.one();
            for (unsigned i = 0; i <= m; ++i) {
                if (F.modulus[i]) acc = E.add(acc, xp);
                xp = E.mul(xp, x);
            }
            if (E.is_zero(acc) && (!found || code < best)) {
                root = x;
                best = code;
                found = true;
            }
        }
        require(found, "field embedding: modulus has no root in the extension", errc::internal);
        gen_powers_.resize(F.k);
        Fe pw = E.one();
        for (unsigned i = 0; i < F.k; ++i) {
            gen_powers_[i] = pw;
            pw = E.mul(pw, root);
        }
    }

    Fe lift(Fe a) const {
        if (identity_) return a;
        u128 v = from->to_uint(a);
        Fe acc = to->zero();
        for (unsigned i = 0; i < from->k; ++i)
            if ((v >> i) & 1) acc = to->add(acc, gen_powers_[i]);
        return acc;
    }

    bool identity() const { return identity_; }

  private:
    bool identity_ = false;
    std::vector<Fe> gen_powers_;
};

}  // namespace agiopp
