#pragma once

#include <thread>

#include "foldplan.hpp"

namespace agiopp {

// Protocol-facing view of a plan: the base alphabet plus the challenge field the
// verifier samples from. Challenges may live in an extension of the alphabet
// (useful headroom on tiny test fields); folded oracles then take values there.
// mu / weight / nu tables are lifted once at construction.
struct ProtocolContext {
    const FoldingPlan* plan = nullptr;
    const Field* base = nullptr;
    const Field* cf = nullptr;  // challenge field
    FieldEmbedding emb;
    std::vector<std::vector<Fe>> mu, wt, nu;

    ProtocolContext(const FoldingPlan& p, const Field& challenge_field)
        : plan(&p), base(p.F), cf(&challenge_field), emb(*p.F, challenge_field) {
        size_t r = p.rounds();
        mu.resize(r);
        wt.resize(r);
        nu.resize(r);
        for (size_t i = 0; i < r; ++i) {
            const LevelData& lv = p.levels[i];
            if (emb.identity()) {
                mu[i] = lv.mu;
                wt[i] = lv.wt;
                nu[i] = lv.nu;
            } else {
                auto lift_all = [&](const std::vector<Fe>& src) {
                    std::vector<Fe> out(src.size());
                    for (size_t k = 0; k < src.size(); ++k) out[k] = emb.lift(src[k]);
                    return out;
                };
                mu[i] = lift_all(lv.mu);
                wt[i] = lift_all(lv.wt);
                nu[i] = lift_all(lv.nu);
            }
        }
    }

    unsigned rounds() const { return plan->rounds(); }
    const Field& oracle_field(size_t level) const { return level == 0 ? *base : *cf; }
    Fe lift0(Fe v) const { return emb.lift(v); }
};

// Coefficients (a_{0,P}, ..., a_{p-1,P}) of the interpolation polynomial I_{f,P}
// through {(mu(Phat), f(Phat)) : Phat in the fiber of P}. `vals` are the fiber
// values in fiber order (already in the challenge field).
inline void fiber_coefficients(const Field& K, const Fe* mu, const Fe* wt, const Fe* vals, u32 p, Fe* out) {
    if (p == 2) {
        // two-point closed form; this is the hot kernel of the RS tail
        Fe a1 = K.add(K.mul(vals[0], wt[0]), K.mul(vals[1], wt[1]));
        out[0] = K.sub(vals[0], K.mul(a1, mu[0]));
        out[1] = a1;
        return;
    }
    // m(X) = prod (X - mu_k), then accumulate vals_k * wt_k * m/(X - mu_k)
    std::vector<Fe> m(p + 1, K.zero());
    m[0] = K.one();
    for (u32 k = 0; k < p; ++k) {
        for (u32 j = k + 1; j-- > 0;) {
            Fe keep = m[j];
            m[j + 1] = K.add(m[j + 1], keep);
            m[j] = K.neg(K.mul(keep, mu[k]));
            if (j == 0) break;
        }
    }
    for (u32 j = 0; j < p; ++j) out[j] = K.zero();
    std::vector<Fe> q(p);
    for (u32 k = 0; k < p; ++k) {
        Fe carry = K.zero();
        for (u32 j = p; j-- > 0;) {
            Fe c = K.add(m[j + 1], K.mul(carry, mu[k]));
            q[j] = c;
            carry = c;
        }
        Fe scale = K.mul(vals[k], wt[k]);
        for (u32 j = 0; j < p; ++j) out[j] = K.add(out[j], K.mul(q[j], scale));
    }
}

// Fold(f, z)(P) = sum_j z1^j a_j + sum_j z2^{j+1} nu_{i+1,j}(P) a_j, computed
// from the p fiber values only. z-power arrays are supplied by the caller so a
// whole fold shares them.
inline Fe fold_at_point(const ProtocolContext& ctx, size_t level, const Fe* fiber_vals, size_t target,
                        const Fe* z1_pows, const Fe* z2_pows) {
    const Field& K = *ctx.cf;
    const LevelData& lv = ctx.plan->levels[level];
    u32 p = lv.p;
    size_t n_next = ctx.plan->levels[level + 1].n;
    Fe coeff[64];
    require(p <= 64, "fold: p_i too large", errc::config);
    fiber_coefficients(K, ctx.mu[level].data() + target * p, ctx.wt[level].data() + target * p, fiber_vals, p, coeff);
    Fe acc = K.zero();
    for (u32 j = 0; j < p; ++j) {
        Fe term = K.mul(z1_pows[j], coeff[j]);
        Fe bal = K.mul(z2_pows[j + 1], K.mul(ctx.nu[level][size_t(j) * n_next + target], coeff[j]));
        acc = K.add(acc, K.add(term, bal));
    }
    return acc;
}

// Whole-table folding: F^{P_i} -> F^{P_{i+1}}. Pure map over the target index
// range; workers partition it and results are identical for any worker count.
inline std::vector<Fe> fold(const ProtocolContext& ctx, size_t level, const std::vector<Fe>& f, Fe z1, Fe z2,
                            unsigned threads = 1) {
    const Field& K = *ctx.cf;
    const LevelData& lv = ctx.plan->levels[level];
    require(level < ctx.rounds(), "fold: level out of range");
    require(f.size() == lv.n, "fold: oracle/domain size mismatch");
    u32 p = lv.p;
    size_t n_next = ctx.plan->levels[level + 1].n;
    std::vector<Fe> z1p(p + 1), z2p(p + 1);
    z1p[0] = K.one();
    z2p[0] = K.one();
    for (u32 j = 1; j <= p; ++j) {
        z1p[j] = K.mul(z1p[j - 1], z1);
        z2p[j] = K.mul(z2p[j - 1], z2);
    }
    bool lift_inputs = (level == 0) && !ctx.emb.identity();
    std::vector<Fe> out(n_next);
    auto work = [&](size_t from, size_t to) {
        std::vector<Fe> vals(p);
        for (size_t t = from; t < to; ++t) {
            for (u32 j = 0; j < p; ++j) {
                Fe v = f[lv.fiber[t * p + j]];
                vals[j] = lift_inputs ? ctx.emb.lift(v) : v;
            }
            out[t] = fold_at_point(ctx, level, vals.data(), t, z1p.data(), z2p.data());
        }
    };
    if (threads <= 1 || n_next < 1024) {
        work(0, n_next);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (n_next + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            size_t a = w * chunk, b = std::min(n_next, a + chunk);
            if (a >= b) break;
            pool.emplace_back(work, a, b);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace agiopp
