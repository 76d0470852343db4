#pragma once

#include "merkle.hpp"
#include "rrbasis.hpp"

namespace agiopp {

enum class PlanFamily : u8 { kummer = 0, tower = 1, rs = 2 };

enum class MuKind : u8 { kummer_y, tower_x, line_u };

// One level of a folding plan: the code C_i plus, for non-terminal levels, all
// precomputed data the folding operator needs (fiber index maps, mu values,
// barycentric interpolation weights, balancing-function tables). The protocol
// hot path is pure table lookups; no curve arithmetic.
struct LevelData {
    u64 n = 0;
    u64 dim = 0;
    i64 deg = 0;
    Rat delta;  // lower bound on the relative minimum distance (exact on Kummer/RS levels)
    Divisor D;
    EvalDomain domain;

    // fold-to-next data (absent on the terminal level)
    u32 p = 0;
    MuKind mu_kind = MuKind::line_u;
    std::vector<u32> proj;   // src index -> target index
    std::vector<u32> fiber;  // grouped per target: sources fiber[t*p .. t*p+p), ascending
    std::vector<Fe> mu;      // fiber-aligned mu values: mu[t*p + j] = mu(source fiber[t*p+j])
    std::vector<Fe> wt;      // fiber-aligned barycentric weights 1 / prod_{b != a}(mu_a - mu_b)
    std::vector<Fe> nu;      // nu[j * n_next + t] = nu_{i+1,j}(P_t), j in [0, p)
    std::vector<Divisor> E;          // E_{i,j} on the next level
    std::vector<Divisor> nu_poles;   // poles(nu_{i+1,j}) = D_{i+1} - E_{i,j}
    std::vector<std::vector<i64>> nu_desc;  // kummer: {e}: (x-alpha_1)^e; tower: exponents of x_0..; line: {e}: u^e

    bool terminal() const { return p == 0; }
};

struct FoldingPlan {
    PlanFamily family = PlanFamily::rs;
    const Field* F = nullptr;
    std::optional<KummerCurve> kummer;
    std::optional<TowerCurve> tower;
    unsigned tower_top = 0;  // ī for tower plans
    unsigned ag_folds = 0;   // number of AG fold steps before the RS tail
    std::vector<LevelData> levels;  // r+1 entries; levels[r] is terminal
    Rat lambda;
    u32 p_max = 0;
    Rat e_exponent{1, 2};
    u128 group_order = 1;  // prod p_i over all fold steps
    Digest digest{};

    unsigned rounds() const { return unsigned(levels.size()) - 1; }
    u64 n0() const { return levels.front().n; }
    u64 proof_length() const {  // field elements sent by the prover, final level included
        u64 s = 0;
        for (size_t i = 1; i < levels.size(); ++i) s += levels[i].n;
        return s;
    }
};

// ---------- principal divisors of the distinguished functions ----------

// Kummer level i: div(y) = P_1 + ... + P_m - m Pinf; div(x - alpha_l) = N_i (P_l - Pinf).
inline Divisor principal_divisor_y(const KummerCurve& c, unsigned level) {
    Divisor d;
    d.level = int(level);
    for (u32 l = 1; l <= c.m(); ++l) d.set(PointKey::root(l), 1);
    d.set(PointKey::inf(), -i64(c.m()));
    return d;
}
inline Divisor principal_divisor_x_minus_alpha(const KummerCurve& c, unsigned level, u32 l) {
    require(l >= 1 && l <= c.m(), "principal_divisor: root index out of range");
    Divisor d;
    d.level = int(level);
    i64 Ni = i64(c.exponent_at(level));
    d.set(PointKey::root(l), Ni);
    d.set(PointKey::inf(), -Ni);
    return d;
}
// Tower level i: div(x_i) = (q+1)^i (P^(i) - Pinf^(i)).
inline Divisor principal_divisor_xi(const TowerCurve& t, unsigned level) {
    require(level >= 1, "principal_divisor: x_0 on the line is div = P(0) - Pinf");
    Divisor d;
    d.level = int(level);
    i64 w = i64(TowerCurve::ipow(i128(t.q) + 1, level));
    d.set(PointKey::origin(), w);
    d.set(PointKey::inf(), -w);
    return d;
}
// v_{Pinf^(L)}(x_j) = -q^{L-j} (q+1)^j for 0 <= j <= L.
inline i64 tower_infinity_valuation(const TowerCurve& t, unsigned L, unsigned j) {
    require(j <= L, "tower_infinity_valuation: j must be <= level");
    return -i64(TowerCurve::ipow(i128(t.q), L - j) * TowerCurve::ipow(i128(t.q) + 1, j));
}
// Line: div(u) = P(0) - Pinf.
inline Divisor principal_divisor_u(const Field& F) {
    Divisor d;
    d.set(PointKey::line(F.to_uint(F.zero())), 1);
    d.set(PointKey::inf(), -1);
    return d;
}

// ---------- balancing exponents (tower): Weierstrass semigroup representation ----------

// Semigroup generators of Pinf^(i-1): q^{i-1-k} (q+1)^k for 0 <= k <= i-1.
inline std::vector<i64> tower_semigroup_generators(u64 q, unsigned i) {
    std::vector<i64> g(i);
    for (unsigned k = 0; k < i; ++k)
        g[k] = i64(TowerCurve::ipow(i128(q), i - 1 - k) * TowerCurve::ipow(i128(q) + 1, k));
    return g;
}

// Nonnegative tuple (a_0..a_{i-1}) with sum a_k q^{i-1-k}(q+1)^k = m, found by
// greedy largest-generator-first search with backtracking (deterministic).
// Errors when m has no representation (a divisor violating the degree rule).
inline std::vector<i64> balancing_exponents(u64 q, unsigned i, i64 m) {
    require(i >= 1, "balancing_exponents: i must be >= 1");
    require(m >= 0, "balancing_exponents: negative pole order");
    std::vector<i64> gens = tower_semigroup_generators(q, i);
    // positions sorted by descending generator value = k from i-1 down to 0
    std::vector<unsigned> order(i);
    for (unsigned k = 0; k < i; ++k) order[k] = i - 1 - k;
    std::vector<i64> a(i, 0);
    std::function<bool(unsigned, i64)> dfs = [&](unsigned pos, i64 left) -> bool {
        if (left == 0) {
            for (unsigned z = pos; z < i; ++z) a[order[z]] = 0;
            return true;
        }
        if (pos == i) return false;
        unsigned k = order[pos];
        for (i64 cnt = left / gens[k]; cnt >= 0; --cnt) {
            a[k] = cnt;
            if (dfs(pos + 1, left - cnt * gens[k])) return true;
        }
        a[k] = 0;
        return false;
    };
    if (!dfs(0, m))
        fail(errc::config, "balancing_exponents: " + std::to_string(m) +
                               " is not in the Weierstrass semigroup at level " + std::to_string(i - 1) +
                               " (divisor violates the compatibility degree rule)");
    return a;
}

namespace detail {

inline void build_fibers(const Field& F, LevelData& lv, const EvalDomain& next) {
    size_t n = lv.n, p = lv.p, nn = next.size();
    require(nn * p == n, "plan: |P_{i+1}| != |P_i| / p_i (free action violated)", errc::config);
    lv.fiber.assign(n, 0);
    std::vector<u32> fill(nn, 0);
    for (size_t s = 0; s < n; ++s) {
        u32 t = lv.proj[s];
        require(t < nn, "plan: projection target out of range", errc::internal);
        require(fill[t] < p, "plan: fiber exceeds p_i (ramified or non-free action)", errc::config);
        lv.fiber[t * p + fill[t]] = u32(s);
        ++fill[t];
    }
    for (u32 c : fill)
        require(c == p, "plan: fiber smaller than p_i (ramification point in domain)", errc::config);
    (void)F;
}

inline void build_weights(const Field& F, LevelData& lv) {
    size_t p = lv.p, nn = lv.n / p;
    lv.wt.assign(lv.n, F.zero());
    for (size_t t = 0; t < nn; ++t) {
        for (size_t a = 0; a < p; ++a) {
            Fe prod = F.one();
            for (size_t b = 0; b < p; ++b) {
                if (b == a) continue;
                Fe diff = F.sub(lv.mu[t * p + a], lv.mu[t * p + b]);
                require(!F.is_zero(diff), "plan: mu not injective on a fiber", errc::config);
                prod = F.mul(prod, diff);
            }
            lv.wt[t * p + a] = F.inv(prod);
        }
    }
}

// The quotient-line 2-to-1 structure used by the RS tail. Char 2 uses the
// Artin-Schreier map x -> x^2 + a x (a nonzero additive stabilizer direction);
// odd characteristic uses x -> x^2 on a negation-closed domain.
struct TailStep {
    bool additive = false;
    Fe a{};  // additive direction (char 2)
};

inline TailStep find_tail_step(const Field& F, const std::vector<Fe>& pts) {
    std::vector<u128> codes(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) codes[i] = F.to_uint(pts[i]);
    std::sort(codes.begin(), codes.end());
    auto member = [&](Fe v) {
        u128 c = F.to_uint(v);
        return std::binary_search(codes.begin(), codes.end(), c);
    };
    TailStep st;
    if (F.p == 2) {
        st.additive = true;
        // smallest nonzero direction stabilizing the set
        for (u128 ai = 1; ai < F.cardinality(); ++ai) {
            Fe a = F.element(ai);
            bool ok = true;
            for (Fe x : pts)
                if (!member(F.add(x, a))) { ok = false; break; }
            if (ok) { st.a = a; return st; }
        }
        fail(errc::config,
             "rs tail: domain is not a union of cosets of an F_2-subspace (lacks the 2-adic structure)");
    }
    st.additive = false;
    for (Fe x : pts) {
        require(!F.is_zero(x), "rs tail: 0 in a multiplicative domain (lacks the 2-adic structure)");
        require(member(F.neg(x)), "rs tail: domain not closed under negation (lacks the 2-adic structure)");
    }
    return st;
}

}  // namespace detail

// ---------- RS tail (fold-to-dimension-1 levels on the quotient line) ----------

// Appends levels folding RS[pts, d] down to degree 0: D = floor(d_i/2) Pinf,
// nu_1 = 1 when d_i is odd, nu_1 = u when d_i is even. Terminates at d = 0.
// RS codes are MDS, so the per-level distance 1 - d/n is exact.
inline void rs_tail_append(const Field& F, std::vector<LevelData>& levels, std::vector<Fe> pts, i64 d) {
    require(d >= 0, "rs_tail: negative degree");
    require(d < i64(pts.size()), "rs_tail: degree must be below the domain size");
    while (true) {
        LevelData lv;
        lv.n = pts.size();
        lv.deg = d;
        lv.dim = u64(d + 1);
        lv.delta = Rat(i128(lv.n) - d, i128(lv.n));
        lv.D.set(PointKey::inf(), d);
        lv.domain.level = levels.empty() ? 0 : levels.back().domain.level + 1;
        lv.domain.coord_count = 1;
        lv.domain.coords = pts;
        lv.domain.sort_points(F);
        pts = std::vector<Fe>(lv.domain.coords);
        if (d == 0) {
            levels.push_back(std::move(lv));
            return;
        }

        detail::TailStep st = detail::find_tail_step(F, pts);
        auto pi = [&](Fe x) {
            return st.additive ? F.add(F.mul(x, x), F.mul(st.a, x)) : F.mul(x, x);
        };
        // image, sorted unique
        std::vector<Fe> img;
        img.reserve(pts.size() / 2);
        for (Fe x : pts) img.push_back(pi(x));
        std::sort(img.begin(), img.end(), [&](Fe a, Fe b) { return F.to_uint(a) < F.to_uint(b); });
        img.erase(std::unique(img.begin(), img.end()), img.end());
        require(img.size() * 2 == pts.size(), "rs_tail: quotient map is not 2-to-1 on the domain");

        lv.p = 2;
        lv.mu_kind = MuKind::line_u;
        lv.proj.resize(pts.size());
        for (size_t s = 0; s < pts.size(); ++s) {
            Fe y = pi(pts[s]);
            size_t t = std::lower_bound(img.begin(), img.end(), y,
                                        [&](Fe a, Fe b) { return F.to_uint(a) < F.to_uint(b); }) -
                       img.begin();
            lv.proj[s] = u32(t);
        }
        EvalDomain next;
        next.coord_count = 1;
        next.coords = img;
        detail::build_fibers(F, lv, next);
        lv.mu.resize(lv.n);
        for (size_t t = 0; t < img.size(); ++t)
            for (size_t j = 0; j < 2; ++j) lv.mu[t * 2 + j] = pts[lv.fiber[t * 2 + j]];
        detail::build_weights(F, lv);

        i64 dn = d / 2;  // floor
        // E_0 = floor(d/2) Pinf = D', E_1 = floor((d-1)/2) Pinf
        for (int j = 0; j < 2; ++j) {
            Divisor E;
            E.set(PointKey::inf(), floor_div(d - j, 2));
            lv.E.push_back(E);
        }
        Divisor Dn;
        Dn.set(PointKey::inf(), dn);
        lv.nu_poles.resize(2);
        lv.nu_poles[0] = Dn - lv.E[0];
        lv.nu_poles[1] = Dn - lv.E[1];
        i64 e1 = (d % 2 == 0) ? 1 : 0;  // nu_1 = u when d even, 1 when d odd
        require(lv.nu_poles[1].degree() == e1, "rs_tail: balancing pole mismatch", errc::internal);
        lv.nu_desc = {{0}, {e1}};
        lv.nu.assign(2 * img.size(), F.one());
        for (size_t t = 0; t < img.size(); ++t)
            if (e1 == 1) lv.nu[img.size() + t] = img[t];

        levels.push_back(std::move(lv));
        pts = std::move(img);
        d = dn;
    }
}

// ---------- Kummer plans ----------

struct PlanOptions {
    Rat e_exponent{1, 2};
    // d_{i-1} = floor(d_i / q) without the 2 g_{i-1} bump: the Remark-6.1 negative knob
    bool tower_no_genus_bump = false;
};

namespace detail {

inline void finalize_plan(FoldingPlan& plan) {
    plan.lambda = plan.levels[0].delta;
    plan.p_max = 0;
    plan.group_order = 1;
    for (auto& lv : plan.levels) {
        if (lv.delta < plan.lambda) plan.lambda = lv.delta;
        if (!lv.terminal()) {
            plan.p_max = std::max(plan.p_max, lv.p);
            plan.group_order *= lv.p;
        }
    }
    require(plan.levels.size() >= 1, "plan: no levels", errc::internal);
    require(plan.proof_length() < plan.n0(), "plan: proof length must stay below n", errc::internal);
    // canonical digest over everything folding semantics depend on
    Sha256 h;
    auto put = [&](const void* d, size_t n) { h.update(d, n); };
    u8 fam = u8(plan.family);
    put(&fam, 1);
    auto fs = plan.F->spec_bytes();
    put(fs.data(), fs.size());
    auto put64 = [&](u64 v) { put(&v, 8); };
    if (plan.kummer) {
        put64(plan.kummer->N);
        put64(plan.kummer->m());
        for (Fe r : plan.kummer->roots) put64(u64(plan.F->to_uint(r)));
    }
    if (plan.tower) {
        put64(plan.tower->q);
        put64(plan.tower_top);
    }
    put64(plan.levels.size());
    std::vector<u8> eb(plan.F->byte_len());
    for (auto& lv : plan.levels) {
        put64(lv.n);
        put64(lv.dim);
        put64(u64(lv.deg));
        put64(lv.p);
        for (Fe c : lv.domain.coords) {
            plan.F->write(c, eb.data());
            put(eb.data(), eb.size());
        }
        for (u32 v : lv.proj) put(&v, 4);
        for (Fe c : lv.mu) {
            plan.F->write(c, eb.data());
            put(eb.data(), eb.size());
        }
        for (Fe c : lv.nu) {
            plan.F->write(c, eb.data());
            put(eb.data(), eb.size());
        }
    }
    plan.digest = h.final();
}

}  // namespace detail

// Plan for a foldable Kummer code C(X_0, P_0, D_0), then the RS tail down to
// dimension 1. Compatibility preconditions: m = -1 mod N,
// every D_0 coefficient divisible by N, deg D_0 < n_0, and the alphabet must
// contain a primitive N-th root of unity.
inline FoldingPlan plan_kummer(const Field& F, const KummerCurve& curve, const Divisor& D0, const EvalDomain& P0,
                               const PlanOptions& opt = {}) {
    u64 N = curve.N, m = curve.m();
    require((m + 1) % N == 0, "plan_kummer: m = " + u128_str(m) + " is not congruent to -1 mod N = " + u128_str(N) +
                                  " (foldability clause: compatible divisor sequence)");
    for (auto& [k, v] : D0.coeffs)
        require(v % i64(N) == 0, "plan_kummer: divisor coefficient " + std::to_string(v) + " at " +
                                     std::string(k.kind == PointKey::Kind::infinity ? "Pinf" : "P_l") +
                                     " not divisible by N (foldability clause: compatible divisor sequence)");
    require(F.unit_order() % N == 0,
            "plan_kummer: alphabet has no primitive N-th root of unity (N does not divide |F| - 1)");
    require(D0.degree() >= 0 && D0.degree() < i64(P0.size()), "plan_kummer: need 0 <= deg D_0 < n_0");
    require(P0.size() % N == 0, "plan_kummer: domain size must be a multiple of the orbit size N");

    FoldingPlan plan;
    plan.family = PlanFamily::kummer;
    plan.F = &F;
    plan.kummer = curve;
    plan.ag_folds = curve.fold_levels();
    plan.e_exponent = opt.e_exponent;

    Rat delta(i128(P0.size()) - D0.degree(), i128(P0.size()));  // exact at every AG level

    BasisContext bctx{&F, &curve};
    EvalDomain dom = P0;
    Divisor D = D0;
    unsigned s = curve.fold_levels();
    for (unsigned i = 0; i < s; ++i) {
        u32 p = curve.primes[i];
        LevelData lv;
        lv.n = dom.size();
        lv.deg = D.degree();
        lv.dim = hu_yang_basis(curve, i, D).size();
        lv.delta = delta;
        lv.D = D;
        lv.domain = dom;
        lv.p = p;
        lv.mu_kind = MuKind::kummer_y;

        size_t next_cc = (i + 1 == s) ? 1 : 2;
        DomainProjection dp = project_domain(curve, i, dom, i + 1, next_cc);
        lv.proj = dp.proj;
        detail::build_fibers(F, lv, dp.image);
        lv.mu.resize(lv.n);
        for (size_t t = 0; t < dp.image.size(); ++t)
            for (size_t j = 0; j < p; ++j) lv.mu[t * p + j] = dom.coords[size_t(lv.fiber[t * p + j]) * 2 + 1];
        detail::build_weights(F, lv);

        // D_{i+1} = D_i / p_i (coefficients exactly divisible), E_{i,j} = D_{i+1} - j k_i N_{i+1} Pinf,
        // nu_{i+1,j} = (x - alpha_1)^{k_i j} with k_i = (m+1)/N_i
        Divisor Dn = floor_divisor(D, p);
        Dn.level = int(i) + 1;
        i64 kappa = i64((m + 1) / curve.exponent_at(i));
        i64 Nn = i64(curve.exponent_at(i + 1));
        for (u32 j = 0; j < p; ++j) {
            Divisor E = Dn;
            E.add_to(PointKey::inf(), -i64(j) * kappa * Nn);
            E.level = int(i) + 1;
            lv.E.push_back(E);
            Divisor pole;
            pole.set(PointKey::inf(), i64(j) * kappa * Nn);
            lv.nu_poles.push_back(pole);
            lv.nu_desc.push_back({i64(j) * kappa});
        }
        lv.nu.assign(size_t(p) * dp.image.size(), F.one());
        Fe alpha1 = curve.roots[0];
        for (size_t t = 0; t < dp.image.size(); ++t) {
            Fe base = F.sub(dp.image.coords[t * next_cc + 0], alpha1);
            for (u32 j = 1; j < p; ++j) lv.nu[size_t(j) * dp.image.size() + t] = F.pow(base, u128(i64(j) * kappa));
        }

        plan.levels.push_back(std::move(lv));
        dom = dp.image;
        D = Dn;
    }

    // line level reached: divisor must be supported at infinity for the RS tail
    i64 d_line = D.at(PointKey::inf());
    for (auto& [k, v] : D.coeffs)
        require(k.kind == PointKey::Kind::infinity,
                "plan_kummer: line-level divisor has finite support; fold-to-constant tail requires a one-point "
                "divisor at infinity");
    std::vector<Fe> line_pts(dom.coords);
    rs_tail_append(F, plan.levels, line_pts, d_line);

    detail::finalize_plan(plan);
    return plan;
}

// ---------- tower plans ----------

// Degree recursion d_{i-1} = floor(d_i / q) + 2 g_{i-1}, from the top level down.
inline std::vector<i64> tower_degree_sequence(const TowerCurve& t, unsigned top, i64 d_top, bool no_genus_bump = false) {
    std::vector<i64> d(top + 1);
    d[top] = d_top;
    for (unsigned i = top; i >= 1; --i) {
        i64 bump = no_genus_bump ? 0 : 2 * i64(t.genus(i - 1));
        d[i - 1] = floor_div(d[i], i64(t.q)) + bump;
    }
    return d;
}

// Sufficient bound certifying the RS root-code rate:
// floor(d_top/q^top) + (top-1)(1 + top/6 (3q - 4 + 2 top)) + 1 < rho * n_0  ==>  rate < rho.
struct TowerRateBound {
    Rat lhs;       // the left-hand side above
    Rat rhs;       // rho * n_0
    bool certified = false;
};
inline TowerRateBound tower_rate_bound(u64 q, unsigned top, i64 d_top, Rat rho, i64 n0_line) {
    TowerRateBound out;
    i128 qi = TowerCurve::ipow(i128(q), top);
    Rat lhs = Rat(i128(floor_div(d_top, i64(qi))), 1) +
              Rat(i128(top) - 1, 1) * (Rat(1) + Rat(i128(top), 6) * Rat(3 * i128(q) - 4 + 2 * i128(top), 1)) + Rat(1);
    out.lhs = lhs;
    out.rhs = rho * Rat(i128(n0_line), 1);
    out.certified = lhs < out.rhs;
    return out;
}

// Plan for a foldable code on tower level `top` with divisor d_top Pinf^(top),
// evaluation domain the preimage of P0_line (default: the whole affine line),
// then the RS tail. Balancing functions are monomials in x_0..x_{i-1} obtained
// from the Weierstrass semigroup representation of the pole orders.
inline FoldingPlan plan_tower(const Field& F, const TowerCurve& t, unsigned top, i64 d_top,
                              std::vector<Fe> P0_line = {}, const PlanOptions& opt = {}) {
    require(top >= 1, "plan_tower: top level must be >= 1");
    require(d_top >= 1, "plan_tower: d_top must be >= 1");

    std::vector<i64> d = tower_degree_sequence(t, top, d_top, opt.tower_no_genus_bump);
    if (P0_line.empty())
        for (u128 xi = 0; xi < F.cardinality(); ++xi) P0_line.push_back(F.element(xi));
    i64 n0_line = i64(P0_line.size());
    if (d[0] + 1 >= n0_line) {
        TowerRateBound rb = tower_rate_bound(t.q, top, d_top, Rat(1), n0_line);
        fail(errc::config, "plan_tower: degenerate plan, RS root code has rate >= 1 (d_0 = " + std::to_string(d[0]) +
                               ", n_0 = " + std::to_string(n0_line) + "; rate bound lhs " + rb.lhs.str() +
                               " vs n_0 " + std::to_string(n0_line) + ")");
    }

    FoldingPlan plan;
    plan.family = PlanFamily::tower;
    plan.F = &F;
    plan.tower = t;
    plan.tower_top = top;
    plan.ag_folds = top;
    plan.e_exponent = opt.e_exponent;

    EvalDomain dom = build_eval_domain(t, top, P0_line);
    for (unsigned lvl = top; lvl >= 1; --lvl) {
        require(d[lvl] < i64(dom.size()),
                "plan_tower: deg D >= n at tower level " + std::to_string(lvl) + " (encoding not injective)");
        LevelData lv;
        lv.n = dom.size();
        lv.deg = d[lvl];
        lv.dim = tower_basis(t, lvl, d[lvl]).size();
        lv.delta = Rat(i128(lv.n) - d[lvl], i128(lv.n));  // Goppa lower bound
        lv.D.set(PointKey::inf(), d[lvl]);
        lv.D.level = int(lvl);
        lv.domain = dom;
        lv.p = u32(t.q);
        lv.mu_kind = MuKind::tower_x;

        size_t next_cc = lvl == 1 ? 1 : lvl;
        DomainProjection dp = project_domain(t, lvl, dom, lvl - 1, next_cc);
        lv.proj = dp.proj;
        detail::build_fibers(F, lv, dp.image);
        lv.mu.resize(lv.n);
        for (size_t tt = 0; tt < dp.image.size(); ++tt)
            for (size_t j = 0; j < lv.p; ++j)
                lv.mu[tt * lv.p + j] = dom.coords[size_t(lv.fiber[tt * lv.p + j]) * (lvl + 1) + lvl];
        detail::build_weights(F, lv);

        // E_{i,j} = floor((d_i - j (q+1)^i)/q) Pinf^(i-1), one-point convention
        i64 qp1i = i64(TowerCurve::ipow(i128(t.q) + 1, lvl));
        lv.nu.assign(size_t(lv.p) * dp.image.size(), F.one());
        for (u32 j = 0; j < lv.p; ++j) {
            i64 ej = floor_div(d[lvl] - i64(j) * qp1i, i64(t.q));
            Divisor E;
            E.set(PointKey::inf(), ej);
            E.level = int(lvl) - 1;
            lv.E.push_back(E);
            i64 mij = d[lvl - 1] - ej;
            std::vector<i64> exps = balancing_exponents(t.q, lvl, mij);
            Divisor pole;
            pole.set(PointKey::inf(), mij);
            lv.nu_poles.push_back(pole);
            lv.nu_desc.push_back(exps);
            for (size_t tt = 0; tt < dp.image.size(); ++tt) {
                Fe v = F.one();
                for (unsigned kk = 0; kk < lvl; ++kk)
                    if (exps[kk]) v = F.mul(v, F.pow(dp.image.coords[tt * next_cc + kk], u128(exps[kk])));
                lv.nu[size_t(j) * dp.image.size() + tt] = v;
            }
        }

        plan.levels.push_back(std::move(lv));
        dom = dp.image;
    }

    std::vector<Fe> line_pts(dom.coords);
    rs_tail_append(F, plan.levels, line_pts, d[0]);
    detail::finalize_plan(plan);
    return plan;
}

// ---------- plain RS plans (multiplicative coset domains) ----------

inline FoldingPlan plan_rs(const Field& F, std::vector<Fe> domain, i64 d, const PlanOptions& opt = {}) {
    FoldingPlan plan;
    plan.family = PlanFamily::rs;
    plan.F = &F;
    plan.ag_folds = 0;
    plan.e_exponent = opt.e_exponent;
    rs_tail_append(F, plan.levels, std::move(domain), d);
    detail::finalize_plan(plan);
    return plan;
}

// convenience: the coset c * <g> with g a primitive 2^log_n-th root of unity
inline std::vector<Fe> rs_coset_domain(const Field& F, unsigned log_n, Fe offset) {
    u128 n = u128(1) << log_n;
    Fe g = F.primitive_root_of_unity(n);
    std::vector<Fe> pts(static_cast<size_t>(n));
    Fe cur = offset;
    for (size_t i = 0; i < n; ++i) {
        pts[i] = cur;
        cur = F.mul(cur, g);
    }
    return pts;
}

// ---------- reference parameter rows for foldable tower codes ----------
//
// Each row lists a rate-R code on tower level `top` over F_{q^2} together with
// the certified bound 1 - rho on the distance of the RS root code.

struct TowerParamRow {
    u64 q;
    unsigned top;
    unsigned log_n;  // block length q^{top+2} = 2^log_n
    Rat rate;
    Rat one_minus_rho;
};

inline std::vector<TowerParamRow> reference_tower_rows() {
    return {
        {16, 3, 20, Rat(1, 8), Rat(1, 3)},  {32, 5, 35, Rat(1, 8), Rat(1, 3)},  {16, 4, 24, Rat(1, 16), Rat(1, 3)},
        {32, 3, 25, Rat(1, 16), Rat(3, 4)}, {32, 5, 35, Rat(1, 16), Rat(1, 2)}, {64, 4, 36, Rat(1, 16), Rat(3, 4)},
        {64, 5, 42, Rat(1, 16), Rat(2, 3)}, {64, 7, 54, Rat(1, 16), Rat(1, 2)}, {16, 3, 20, Rat(1, 32), Rat(1, 2)},
    };
}

// Divisor degree realizing rate ~ R on level `top`: d = floor((2 R q / top + 1) g_top).
inline i64 tower_divisor_degree_for_rate(u64 q, unsigned top, Rat R) {
    TowerCurve t;
    t.q = q;
    i128 g = t.genus(top);
    i128 num = (2 * R.num * i128(q) + R.den * i128(top)) * g;
    i128 den = R.den * i128(top);
    return i64(num / den);
}

}  // namespace agiopp
