#pragma once

#include <unordered_map>

#include "divisor.hpp"

namespace agiopp {

// A point at one level of a curve sequence. Kummer levels 0..s-1 carry (x, y);
// the quotient line (Kummer level s, tower level 0) carries a single coordinate.
// Tower level i carries (x_0, ..., x_i).
struct CurvePoint {
    bool at_infinity = false;
    std::vector<Fe> xs;

    friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
        return a.at_infinity == b.at_infinity && a.xs == b.xs;
    }
};

// Kummer curve y^N = f(x) = prod (x - alpha_l), with the level-i quotients
// y^{N_i} = f(x) for N_i = prod_{j >= i} p_j. Level s is the projective line.
struct KummerCurve {
    const Field* F = nullptr;
    u64 N = 0;
    std::vector<u32> primes;  // ascending prime factorization of N, with multiplicity
    std::vector<Fe> roots;    // alpha_1..alpha_m, sorted by element code

    static std::vector<u32> factor(u64 n) {
        std::vector<u32> ps;
        for (u64 q = 2; q * q <= n; ++q)
            while (n % q == 0) { ps.push_back(u32(q)); n /= q; }
        if (n > 1) ps.push_back(u32(n));
        return ps;
    }

    static KummerCurve make(const Field& F, u64 N, std::vector<Fe> roots) {
        KummerCurve c;
        c.F = &F;
        c.N = N;
        c.primes = factor(N);
        std::sort(roots.begin(), roots.end(),
                  [&](Fe a, Fe b) { return F.to_uint(a) < F.to_uint(b); });
        for (size_t i = 0; i + 1 < roots.size(); ++i)
            require(roots[i] != roots[i + 1], "kummer: roots must be pairwise distinct (f separable)");
        c.roots = std::move(roots);
        require(c.m() >= 1, "kummer: f must have at least one root");
        require(N >= 2, "kummer: N must be >= 2");
        require(N % F.p != 0, "kummer: gcd(N, |F|) must be 1");
        return c;
    }

    u64 m() const { return roots.size(); }
    unsigned fold_levels() const { return unsigned(primes.size()); }  // s

    u64 exponent_at(unsigned level) const {  // N_level
        u64 e = 1;
        for (unsigned j = level; j < primes.size(); ++j) e *= primes[j];
        return e;
    }

    // g_i = (N_i - 1)(m - 1)/2
    i64 genus(unsigned level) const { return i64(exponent_at(level) - 1) * i64(m() - 1) / 2; }

    Fe f_at(Fe x) const {
        Fe acc = F->one();
        for (Fe a : roots) acc = F->mul(acc, F->sub(x, a));
        return acc;
    }
};

// Artin-Schreier tower x_i^q + x_i = x_{i-1}^{q+1} over F_{q^2}; level 0 is the line.
struct TowerCurve {
    const Field* F = nullptr;  // F_{q^2}
    u64 q = 0;

    static TowerCurve make(const Field& F, u64 q) {
        TowerCurve t;
        t.F = &F;
        t.q = q;
        u128 qq = u128(q) * q;
        require(F.cardinality() == qq, "tower: alphabet must be F_{q^2}");
        return t;
    }

    // Eq.-style closed genus formula: g_0 = 0 and
    // g_i = ((q^2-1)((q+1)^i - q^i) + 1 - q^i) / 2
    i128 genus(unsigned i) const {
        if (i == 0) return 0;
        i128 qi = ipow(i128(q), i), qp1i = ipow(i128(q) + 1, i);
        return ((i128(q) * q - 1) * (qp1i - qi) + 1 - qi) / 2;
    }

    // trace map x -> x^q + x onto F_q
    Fe artin_schreier(Fe x) const {
        Fe t = F->pow(x, q);
        return F->add(t, x);
    }
    Fe norm_pow(Fe x) const { return F->pow(x, q + 1); }  // x^{q+1}

    static i128 ipow(i128 b, unsigned e) {
        i128 r = 1;
        while (e--) r *= b;
        return r;
    }
};

namespace detail {
inline u64 fe_hash(const std::vector<Fe>& xs, size_t from, size_t count) {
    u64 h = 0x9e3779b97f4a7c15ull;
    for (size_t i = 0; i < count; ++i) {
        h ^= xs[from + i].lo + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= xs[from + i].hi + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}
}  // namespace detail

// Ordered evaluation domain at one level of a curve sequence: n points of
// coord_count coordinates each, stored flat, sorted lexicographically by
// coordinate codes. Infinity never belongs to an evaluation domain.
struct EvalDomain {
    unsigned level = 0;
    size_t coord_count = 1;
    std::vector<Fe> coords;  // size() * coord_count

    size_t size() const { return coord_count ? coords.size() / coord_count : 0; }
    const Fe* point(size_t i) const { return coords.data() + i * coord_count; }

    std::vector<Fe> point_vec(size_t i) const {
        return std::vector<Fe>(point(i), point(i) + coord_count);
    }

    size_t find(const Field& F, const Fe* p) const {
        for (size_t i = 0; i < size(); ++i) {
            bool eq = true;
            for (size_t c = 0; c < coord_count; ++c)
                if (coords[i * coord_count + c] != p[c]) { eq = false; break; }
            if (eq) return i;
        }
        return size_t(-1);
    }

    void sort_points(const Field& F) {
        size_t n = size();
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            for (size_t c = 0; c < coord_count; ++c) {
                u128 ca = F.to_uint(coords[a * coord_count + c]);
                u128 cb = F.to_uint(coords[b * coord_count + c]);
                if (ca != cb) return ca < cb;
            }
            return false;
        });
        std::vector<Fe> out(coords.size());
        for (size_t i = 0; i < n; ++i)
            for (size_t c = 0; c < coord_count; ++c) out[i * coord_count + c] = coords[idx[i] * coord_count + c];
        coords.swap(out);
    }
};

// ---------- point enumeration (exhaustive, desk scale) ----------

// All rational points of Kummer level `level`, infinity included (flagged).
inline std::vector<CurvePoint> enumerate_points(const KummerCurve& c, unsigned level) {
    const Field& F = *c.F;
    require(F.cardinality() <= (u128(1) << 20), "enumerate_points: field too large for exhaustive sweep");
    u64 Ni = c.exponent_at(level);
    std::vector<CurvePoint> pts;
    for (u128 xi = 0; xi < F.cardinality(); ++xi) {
        Fe x = F.element(xi);
        Fe fx = c.f_at(x);
        if (level == c.fold_levels()) {
            pts.push_back(CurvePoint{false, {x}});  // the quotient line
            continue;
        }
        for (u128 yi = 0; yi < F.cardinality(); ++yi) {
            Fe y = F.element(yi);
            if (F.pow(y, Ni) == fx) pts.push_back(CurvePoint{false, {x, y}});
        }
    }
    pts.push_back(CurvePoint{true, {}});
    return pts;
}

// All rational points of tower level `level` (level 0 = line), infinity included.
inline std::vector<CurvePoint> enumerate_points(const TowerCurve& t, unsigned level) {
    const Field& F = *t.F;
    std::vector<CurvePoint> pts;
    pts.push_back(CurvePoint{false, {}});  // seed: empty affine tuple
    for (unsigned l = 0; l <= level; ++l) {
        std::vector<CurvePoint> next;
        for (const CurvePoint& p : pts) {
            for (u128 xi = 0; xi < F.cardinality(); ++xi) {
                Fe xl = F.element(xi);
                if (l > 0) {
                    Fe lhs = t.artin_schreier(xl);
                    Fe rhs = t.norm_pow(p.xs[l - 1]);
                    if (!(lhs == rhs)) continue;
                }
                CurvePoint np = p;
                np.xs.push_back(xl);
                next.push_back(std::move(np));
            }
        }
        pts.swap(next);
    }
    pts.push_back(CurvePoint{true, {}});
    return pts;
}

// ---------- projections and fibers ----------

// Kummer: (x, y) at level i -> (x, y^{p_i}); the last projection lands on the line (x).
inline CurvePoint project(const KummerCurve& c, unsigned level, const CurvePoint& P) {
    if (P.at_infinity) return P;
    require(level < c.fold_levels(), "project: level has no quotient");
    u32 p = c.primes[level];
    if (level + 1 == c.fold_levels()) return CurvePoint{false, {P.xs[0]}};
    return CurvePoint{false, {P.xs[0], c.F->pow(P.xs[1], p)}};
}

// Tower: projection onto the first i coordinates (drop x_i); level 1 lands on the line.
inline CurvePoint project(const TowerCurve& t, unsigned src_level, const CurvePoint& P) {
    (void)t;
    if (P.at_infinity) return P;
    require(src_level >= 1, "project: tower level 0 has no quotient");
    require(P.xs.size() == src_level + 1, "project: point/level mismatch");
    CurvePoint out = P;
    out.xs.pop_back();
    return out;
}

// Preimages of P (at level+1) on Kummer level `level`. Errors on ramification points.
inline std::vector<CurvePoint> fiber(const KummerCurve& c, unsigned level, const CurvePoint& P) {
    const Field& F = *c.F;
    require(level < c.fold_levels(), "fiber: level out of range");
    u32 p = c.primes[level];
    if (P.at_infinity) fail(errc::config, "fiber: P_inf is a ramification point");
    Fe target = (level + 1 == c.fold_levels()) ? c.f_at(P.xs[0]) : P.xs[1];
    if (F.is_zero(target)) fail(errc::config, "fiber: ramification point (y = 0)");
    std::vector<CurvePoint> out;
    for (u128 yi = 0; yi < F.cardinality(); ++yi) {
        Fe y = F.element(yi);
        if (F.pow(y, p) == target) out.push_back(CurvePoint{false, {P.xs[0], y}});
    }
    require(out.size() == p, "fiber: expected " + std::to_string(p) + " preimages, found " + std::to_string(out.size()),
            errc::config);
    return out;
}

// Preimages of P (at level-1 in tower indexing) on tower level `src_level`.
inline std::vector<CurvePoint> fiber(const TowerCurve& t, unsigned src_level, const CurvePoint& P) {
    const Field& F = *t.F;
    require(src_level >= 1, "fiber: source level must be >= 1");
    if (P.at_infinity) fail(errc::config, "fiber: P_inf is a ramification point (totally ramified)");
    require(P.xs.size() == src_level, "fiber: point level mismatch");
    Fe rhs = t.norm_pow(P.xs[src_level - 1]);
    std::vector<CurvePoint> out;
    for (u128 xi = 0; xi < F.cardinality(); ++xi) {
        Fe xl = F.element(xi);
        if (t.artin_schreier(xl) == rhs) {
            CurvePoint np = P;
            np.xs.push_back(xl);
            out.push_back(std::move(np));
        }
    }
    require(out.size() == t.q, "fiber: expected q preimages", errc::config);
    return out;
}

// ---------- evaluation domains ----------

// Kummer level-0 domain: full Z/NZ-orbits among non-fixed rational points,
// lexicographically first orbits when a count is requested.
inline EvalDomain build_eval_domain(const KummerCurve& c, size_t orbit_count = size_t(-1)) {
    const Field& F = *c.F;
    EvalDomain d;
    d.level = 0;
    d.coord_count = 2;
    size_t taken = 0;
    for (u128 xi = 0; xi < F.cardinality() && taken < orbit_count; ++xi) {
        Fe x = F.element(xi);
        Fe fx = c.f_at(x);
        if (F.is_zero(fx)) continue;  // P_l, fixed
        std::vector<Fe> ys;
        for (u128 yi = 0; yi < F.cardinality(); ++yi) {
            Fe y = F.element(yi);
            if (F.pow(y, c.N) == fx) ys.push_back(y);
        }
        if (ys.empty()) continue;
        require(ys.size() == c.N, "build_eval_domain: orbit of unexpected size", errc::internal);
        for (Fe y : ys) {
            d.coords.push_back(x);
            d.coords.push_back(y);
        }
        ++taken;
    }
    require(orbit_count == size_t(-1) || taken == orbit_count,
            "build_eval_domain: requested more orbits than available");
    require(d.size() > 0, "build_eval_domain: empty domain (does F contain the N-th roots of unity?)");
    d.sort_points(F);
    return d;
}

// Tower level-`top` domain: preimage of the chosen line points under the
// composed projection. Defaults to the whole affine line downstairs.
inline EvalDomain build_eval_domain(const TowerCurve& t, unsigned top, std::vector<Fe> line_points = {}) {
    const Field& F = *t.F;
    if (line_points.empty())
        for (u128 xi = 0; xi < F.cardinality(); ++xi) line_points.push_back(F.element(xi));
    EvalDomain d;
    d.level = top;
    d.coord_count = top + 1;
    std::vector<std::vector<Fe>> cur;
    for (Fe x0 : line_points) cur.push_back({x0});
    for (unsigned l = 1; l <= top; ++l) {
        std::vector<std::vector<Fe>> next;
        for (auto& p : cur) {
            Fe rhs = t.norm_pow(p[l - 1]);
            for (u128 xi = 0; xi < F.cardinality(); ++xi) {
                Fe xl = F.element(xi);
                if (t.artin_schreier(xl) == rhs) {
                    auto np = p;
                    np.push_back(xl);
                    next.push_back(std::move(np));
                }
            }
        }
        cur.swap(next);
    }
    for (auto& p : cur)
        for (Fe v : p) d.coords.push_back(v);
    require(d.size() > 0, "build_eval_domain: empty tower domain");
    d.sort_points(F);
    return d;
}

// Project a whole domain one level down; returns the (sorted, deduplicated)
// image and the index map src -> image position.
struct DomainProjection {
    EvalDomain image;
    std::vector<u32> proj;  // size = source size
};

template <class Curve>
inline DomainProjection project_domain(const Curve& c, unsigned level, const EvalDomain& src, unsigned tgt_level,
                                       size_t tgt_coord_count) {
    const Field& F = *c.F;
    size_t n = src.size();
    std::vector<Fe> img_coords;
    img_coords.reserve(n * tgt_coord_count);
    std::vector<std::vector<Fe>> images(n);
    for (size_t i = 0; i < n; ++i) {
        CurvePoint P{false, src.point_vec(i)};
        CurvePoint Q = project(c, level, P);
        images[i] = Q.xs;
        require(images[i].size() == tgt_coord_count, "project_domain: coord count mismatch", errc::internal);
    }
    // sorted unique images
    std::vector<std::vector<Fe>> uniq = images;
    auto cmp = [&](const std::vector<Fe>& a, const std::vector<Fe>& b) {
        for (size_t c2 = 0; c2 < a.size(); ++c2) {
            u128 ca = F.to_uint(a[c2]), cb = F.to_uint(b[c2]);
            if (ca != cb) return ca < cb;
        }
        return false;
    };
    std::sort(uniq.begin(), uniq.end(), cmp);
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    DomainProjection out;
    out.image.level = tgt_level;
    out.image.coord_count = tgt_coord_count;
    for (auto& p : uniq)
        for (Fe v : p) out.image.coords.push_back(v);
    out.proj.resize(n);
    for (size_t i = 0; i < n; ++i) {
        size_t lo = std::lower_bound(uniq.begin(), uniq.end(), images[i], cmp) - uniq.begin();
        out.proj[i] = u32(lo);
    }
    return out;
}

}  // namespace agiopp
