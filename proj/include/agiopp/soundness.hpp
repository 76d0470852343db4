#pragma once

#include <quadmath.h>

#include "common.hpp"

namespace agiopp {

// Enclosure arithmetic on binary128 (113-bit mantissa) with outward rounding:
// every operation widens its result by one ulp per endpoint, so .hi is always a
// valid upper bound and .lo a valid lower bound. Soundness bounds are reported
// from .hi and can never be under-reported.
struct QB {
    __float128 lo = 0, hi = 0;

    static QB exact(__float128 v) { return QB{v, v}; }
    static QB from_u128(u128 v) {
        // build then widen (the conversion may round for > 113-bit values)
        __float128 x = ldexpq(__float128(u64(v >> 64)), 64) + __float128(u64(v));
        QB r{x, x};
        return r.widen();
    }
    static QB from_rat(Rat r) {
        bool neg = (r.num < 0);
        u128 an = u128(neg ? -r.num : r.num), ad = u128(r.den);
        QB num = from_u128(an), den = from_u128(ad);
        QB q = div(num, den);
        if (neg) q = neg_of(q);
        return q;
    }

    QB widen() const {
        QB r = *this;
        r.lo = nextafterq(r.lo, -HUGE_VALQ);
        r.hi = nextafterq(r.hi, HUGE_VALQ);
        return r;
    }
    static QB neg_of(QB a) { return QB{-a.hi, -a.lo}; }

    static QB add(QB a, QB b) { return QB{a.lo + b.lo, a.hi + b.hi}.widen(); }
    static QB sub(QB a, QB b) { return QB{a.lo - b.hi, a.hi - b.lo}.widen(); }
    static QB mul(QB a, QB b) {
        __float128 c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        __float128 mn = c[0], mx = c[0];
        for (int i = 1; i < 4; ++i) {
            if (c[i] < mn) mn = c[i];
            if (c[i] > mx) mx = c[i];
        }
        return QB{mn, mx}.widen();
    }
    static QB div(QB a, QB b) {
        require(b.lo > 0 || b.hi < 0, "qb: division by an interval containing zero", errc::internal);
        __float128 c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
        __float128 mn = c[0], mx = c[0];
        for (int i = 1; i < 4; ++i) {
            if (c[i] < mn) mn = c[i];
            if (c[i] > mx) mx = c[i];
        }
        return QB{mn, mx}.widen();
    }
    static QB sqrt(QB a) {
        require(a.lo >= 0, "qb: sqrt of negative interval");
        return QB{sqrtq(a.lo), sqrtq(a.hi)}.widen();
    }
    static QB cbrt(QB a) { return QB{cbrtq(a.lo), cbrtq(a.hi)}.widen(); }
    static QB log2(QB a) {
        require(a.lo > 0, "qb: log2 of non-positive interval");
        return QB{log2q(a.lo), log2q(a.hi)}.widen();
    }
    static QB exp2(QB a) { return QB{exp2q(a.lo), exp2q(a.hi)}.widen(); }
    static QB pow_u(QB a, u64 e) {  // a >= 0
        QB r = exact(1), x = a;
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
    static QB min(QB a, QB b) { return QB{a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi}; }

    double lo_d() const { return double(lo); }
    double hi_d() const { return double(hi); }

    std::string str(int digits = 20) const {
        char buf[64];
        quadmath_snprintf(buf, sizeof buf, "%.*Qg", digits, hi);
        return buf;
    }
    // truncated decimal of the upper bound, e.g. digits=5: 0.7272857 -> "0.72728"
    std::string truncated(int digits) const {
        __float128 scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10;
        __float128 t = floorq(hi * scale) / scale;
        char buf[64];
        quadmath_snprintf(buf, sizeof buf, "%.*Qf", digits, t);
        return buf;
    }
};

// ---------- the soundness formulas ----------

// J_eps(lam) = 1 - sqrt(1 - (1 - eps) lam). Enclosures straddling the domain
// boundary by rounding are clamped; genuinely out-of-range inputs are rejected.
inline QB johnson(QB eps, QB lam) {
    require(eps.lo > 0 && eps.lo <= 1, "johnson: eps must lie in (0, 1]");
    require(lam.hi >= 0 && lam.lo <= 1, "johnson: lambda must lie in [0, 1]");
    if (eps.hi > 1) eps.hi = 1;
    if (lam.lo < 0) lam.lo = 0;
    if (lam.hi > 1) lam.hi = 1;
    QB inner = QB::sub(QB::exact(1), QB::mul(QB::sub(QB::exact(1), eps), lam));
    if (inner.lo < 0) inner.lo = 0;
    return QB::sub(QB::exact(1), QB::sqrt(inner));
}

inline QB johnson_iter(QB eps, QB lam, unsigned l) {
    QB v = lam;
    for (unsigned i = 0; i < l; ++i) v = johnson(eps, v);
    return v;
}

// gamma = min(J_eps^{p_max}(lam), (lam + eps/2)/2)
inline QB gamma_bound(QB lam, QB eps, u32 p_max) {
    QB a = johnson_iter(eps, lam, p_max);
    QB b = QB::div(QB::add(lam, QB::div(eps, QB::exact(2))), QB::exact(2));
    return QB::min(a, b);
}

// err_commit <= (log2 n / |F|) (p_max + 4/eps - 1) (4/eps)^{p_max}
inline QB err_commit(u64 n, QB field_size, u32 p_max, QB eps) {
    QB logn = QB::log2(QB::from_u128(n));
    QB four_over = QB::div(QB::exact(4), eps);
    QB factor = QB::add(QB::exact(__float128(p_max) - 1), four_over);
    return QB::mul(QB::div(logn, field_size), QB::mul(factor, QB::pow_u(four_over, p_max)));
}

// err_query(delta) <= 1 - min(delta, gamma) + eps log2 n   (as displayed)
inline QB err_query(QB delta, QB gamma, QB eps, u64 n) {
    QB m = QB::min(delta, gamma);
    QB logn = QB::log2(QB::from_u128(n));
    return QB::add(QB::sub(QB::exact(1), m), QB::mul(eps, logn));
}

inline QB total_err(QB commit, QB query, u64 t) { return QB::add(commit, QB::pow_u(query, t)); }

// Minimal t with err_query^t <= 2^-(kappa+1), requiring err_commit <= 2^-(kappa+1),
// so that the total error is at most 2^-kappa (each term gets half the budget).
// Errors when no t can reach the target.
inline u64 min_repetitions(QB commit, QB query, u32 kappa) {
    require(kappa >= 1, "min_repetitions: kappa must be positive");
    __float128 target = exp2q(-__float128(kappa) - 1);
    require(query.hi < 1, "min_repetitions: err_query >= 1, no repetition count achieves the target");
    require(commit.hi <= target,
            "min_repetitions: err_commit exceeds 2^-(kappa+1); the commit-phase bound cannot be amplified by t");
    __float128 l = logq(query.hi);
    u64 t = u64(ceilq((-(__float128(kappa) + 1) * logq(__float128(2))) / l));
    if (t == 0) t = 1;
    while (QB::pow_u(query, t).hi > target) ++t;
    while (t > 1 && QB::pow_u(query, t - 1).hi <= target) --t;
    return t;
}

struct SoundnessReport {
    u64 n = 0;
    u32 p_max = 0;
    QB field_size;
    QB lambda, eps, delta, gamma;
    QB commit, query, total;
    u64 t = 0;
    bool t_from_kappa = false;
    u32 kappa = 0;
};

inline SoundnessReport soundness_report(u64 n, QB field_size, u32 p_max, QB lambda, QB eps, QB delta,
                                        std::optional<u64> t, std::optional<u32> kappa) {
    SoundnessReport r;
    r.n = n;
    r.p_max = p_max;
    r.field_size = field_size;
    r.lambda = lambda;
    r.eps = eps;
    r.delta = delta;
    r.gamma = gamma_bound(lambda, eps, p_max);
    r.commit = err_commit(n, field_size, p_max, eps);
    r.query = err_query(delta, r.gamma, eps, n);
    if (kappa) {
        r.kappa = *kappa;
        r.t_from_kappa = true;
        r.t = min_repetitions(r.commit, r.query, *kappa);
    } else {
        require(t.has_value(), "soundness: need t or kappa");
        r.t = *t;
    }
    r.total = total_err(r.commit, r.query, r.t);
    return r;
}

// One-dimensional search for the eps minimizing t at fixed kappa (no closed
// form exists for the best choice). Grid over eps = 2^-j/4.
inline QB select_epsilon(u64 n, QB field_size, u32 p_max, QB lambda, QB delta, u32 kappa, u64* t_out = nullptr) {
    QB best_eps = QB::exact(0);
    u64 best_t = ~u64(0);
    for (int j = 4; j <= 4 * 40; ++j) {
        QB eps = QB::exp2(QB::exact(-__float128(j) / 4));
        QB commit = err_commit(n, field_size, p_max, eps);
        __float128 target = exp2q(-__float128(kappa) - 1);
        if (commit.hi > target) continue;
        QB g = gamma_bound(lambda, eps, p_max);
        QB query = err_query(delta, g, eps, n);
        if (query.hi >= 1) continue;
        u64 t = min_repetitions(commit, query, kappa);
        if (t < best_t) {
            best_t = t;
            best_eps = eps;
        }
    }
    require(best_t != ~u64(0), "select_epsilon: no epsilon achieves the target soundness (field too small?)");
    if (t_out) *t_out = best_t;
    return best_eps;
}

// ---------- the worked example (pure arithmetic, no protocol run) ----------
//
// Kummer curve y^N = x^3 + x over F_{q^2}, q = 2^61 - 1, N = 2^16, maximal of
// genus N - 1; D_0 = 2^17 Pinf, n = 2^20, eps = 2^-6.55. The example's own
// distance choice is 1 - delta = (1 - lambda + eps)^{1/3}.
struct PaperExample {
    u128 dim = 0;            // 2^16 + 2
    QB err_commit_bound;     // <= 2^-91
    QB one_minus_delta;      // <= 0.51384
    QB err_query_bound;      // ~ 0.72728
    u64 t = 0;               // 199 at kappa = 90
    QB total;                // <= 2^-90
};

inline PaperExample paper_example() {
    PaperExample ex;
    const u64 q = (u64(1) << 61) - 1;
    const u128 field_size = u128(q) * q;
    const i64 N = i64(1) << 16;
    const i64 genus = N - 1;                  // (N-1)(m-1)/2 with m = 3
    const i64 deg_D0 = i64(1) << 17;
    const u64 n = u64(1) << 20;
    ex.dim = u128(deg_D0 - genus + 1);        // Riemann-Roch, deg >= 2g - 1

    QB eps = QB::exp2(QB::from_rat(Rat(-655, 100)));
    QB lambda = QB::sub(QB::exact(1), QB::exp2(QB::exact(-3)));  // Goppa: 1 - deg/n = 1 - 2^-3
    ex.err_commit_bound = err_commit(n, QB::from_u128(field_size), 2, eps);
    // 1 - delta = (1 - lambda + eps)^(1/3)
    ex.one_minus_delta = QB::cbrt(QB::add(QB::sub(QB::exact(1), lambda), eps));
    ex.err_query_bound = QB::add(ex.one_minus_delta, QB::mul(eps, QB::exact(20)));
    ex.t = min_repetitions(ex.err_commit_bound, ex.err_query_bound, 90);
    ex.total = total_err(ex.err_commit_bound, ex.err_query_bound, ex.t);
    return ex;
}

}  // namespace agiopp
