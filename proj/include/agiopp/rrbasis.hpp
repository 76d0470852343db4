#pragma once

#include <functional>

#include "curves.hpp"
#include "poly.hpp"

namespace agiopp {

// Exponent data of one Riemann-Roch basis function.
//   kummer: e = (j, j_2, ..., j_m)        E = y^j * prod_{l>=2} (x - alpha_l)^{j_l}
//   tower:  e = (a_0, ..., a_i)           x_0^{a_0} ... x_i^{a_i}
//   line:   e = (d)                       u^d
struct BasisFunction {
    enum class Kind : u8 { kummer, tower, line };
    Kind kind = Kind::line;
    std::vector<i64> e;
};

// ---------- basis generation ----------

// Hu-Yang basis of L(D) on Kummer level `level`, D = sum a_l P_l + b Pinf.
// The enumeration set requires j + a_1 >= 0, j_l = ceil((-j - a_l)/N) and
// m j + N sum j_l <= b. j is bounded above by b + N*m, beyond which the weight
// condition provably fails.
inline std::vector<BasisFunction> hu_yang_basis(const KummerCurve& c, unsigned level, const Divisor& D) {
    i64 N = i64(c.exponent_at(level));
    i64 m = i64(c.m());
    i64 b = D.at(PointKey::inf());
    std::vector<i64> a(m + 1, 0);
    for (auto& [k, v] : D.coeffs) {
        if (k.kind == PointKey::Kind::infinity) continue;
        require(k.kind == PointKey::Kind::kummer_root && k.index >= 1 && i64(k.index) <= m,
                "hu_yang_basis: divisor must be supported on P_1..P_m, Pinf");
        a[k.index] = v;
    }
    std::vector<BasisFunction> out;
    i64 j_hi = b + N * m;
    for (i64 j = -a[1]; j <= j_hi; ++j) {
        i64 w = m * j;
        BasisFunction f;
        f.kind = BasisFunction::Kind::kummer;
        f.e.resize(m);
        f.e[0] = j;
        for (i64 l = 2; l <= m; ++l) {
            i64 jl = ceil_div_i(-j - a[l], N);
            f.e[l - 1] = jl;
            w += N * jl;
        }
        if (w <= b) out.push_back(std::move(f));
    }
    return out;
}

// Basis of L(m Pinf) on tower level `level`: monomials x_0^{a_0}..x_level^{a_level}
// with 0 <= a_j <= q-1 for j >= 1 and sum a_j q^{level-j}(q+1)^j <= bound.
inline std::vector<BasisFunction> tower_basis(const TowerCurve& t, unsigned level, i64 bound) {
    std::vector<BasisFunction> out;
    if (bound < 0) return out;
    std::vector<i64> w(level + 1);
    for (unsigned j = 0; j <= level; ++j)
        w[j] = i64(TowerCurve::ipow(i128(t.q), level - j) * TowerCurve::ipow(i128(t.q) + 1, j));
    std::vector<i64> e(level + 1, 0);
    // lexicographic enumeration over exponent tuples
    std::function<void(unsigned, i64)> rec = [&](unsigned pos, i64 left) {
        if (pos > level) {
            BasisFunction f;
            f.kind = BasisFunction::Kind::tower;
            f.e = e;
            out.push_back(std::move(f));
            return;
        }
        i64 cap = (pos == 0) ? left / w[0] : std::min<i64>(i64(t.q) - 1, left / w[pos]);
        for (i64 v = 0; v <= cap; ++v) {
            e[pos] = v;
            rec(pos + 1, left - v * w[pos]);
        }
        e[pos] = 0;
    };
    rec(0, bound);
    std::sort(out.begin(), out.end(), [](const BasisFunction& x, const BasisFunction& y) { return x.e < y.e; });
    return out;
}

// Basis of L(d Pinf) on the line: monomials 1, u, ..., u^d.
inline std::vector<BasisFunction> line_basis(i64 d) {
    std::vector<BasisFunction> out;
    for (i64 i = 0; i <= d; ++i) {
        BasisFunction f;
        f.kind = BasisFunction::Kind::line;
        f.e = {i};
        out.push_back(std::move(f));
    }
    return out;
}

// ---------- evaluation ----------

struct BasisContext {
    const Field* F = nullptr;
    const KummerCurve* kummer = nullptr;  // for kummer kind
};

// Value of a basis function at an affine point (pole -> error). Negative Kummer
// exponents are evaluated as separate numerator/denominator; domain points are
// disjoint from Supp(D), so 0/0 cannot occur there.
inline Fe evaluate_basis_function(const BasisContext& ctx, const BasisFunction& b, const Fe* pt, size_t coord_count) {
    const Field& F = *ctx.F;
    switch (b.kind) {
        case BasisFunction::Kind::line: {
            require(coord_count == 1, "basis eval: line point expected");
            return F.pow(pt[0], u128(b.e[0]));
        }
        case BasisFunction::Kind::tower: {
            require(coord_count == b.e.size(), "basis eval: tower point arity mismatch");
            Fe acc = F.one();
            for (size_t j = 0; j < b.e.size(); ++j) acc = F.mul(acc, F.pow(pt[j], u128(b.e[j])));
            return acc;
        }
        case BasisFunction::Kind::kummer: {
            require(ctx.kummer != nullptr, "basis eval: kummer context missing");
            require(coord_count == 2, "basis eval: kummer point expected");
            const KummerCurve& c = *ctx.kummer;
            Fe x = pt[0], y = pt[1];
            Fe num = F.one(), den = F.one();
            i64 j = b.e[0];
            if (j >= 0)
                num = F.mul(num, F.pow(y, u128(j)));
            else {
                require(!F.is_zero(y), "basis eval: pole encountered (y = 0)");
                den = F.mul(den, F.pow(y, u128(-j)));
            }
            for (size_t l = 2; l <= c.m(); ++l) {
                i64 jl = b.e[l - 1];
                if (jl == 0) continue;
                Fe base = F.sub(x, c.roots[l - 1]);
                if (jl > 0)
                    num = F.mul(num, F.pow(base, u128(jl)));
                else {
                    require(!F.is_zero(base), "basis eval: pole encountered at x = alpha_" + std::to_string(l));
                    den = F.mul(den, F.pow(base, u128(-jl)));
                }
            }
            return F.div(num, den);
        }
    }
    fail(errc::internal, "basis eval: bad kind");
}

// ---------- codes: generator matrices, encoding, rank, distance ----------

struct Matrix {
    size_t rows = 0, cols = 0;
    std::vector<Fe> a;
    Matrix() = default;
    Matrix(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
    Fe& at(size_t r, size_t c) { return a[r * cols + c]; }
    Fe at(size_t r, size_t c) const { return a[r * cols + c]; }
};

// Generator matrix: rows = basis functions evaluated on the domain (row-major).
inline Matrix generator_matrix(const BasisContext& ctx, const std::vector<BasisFunction>& basis,
                               const EvalDomain& dom) {
    Matrix G(basis.size(), dom.size());
    for (size_t r = 0; r < basis.size(); ++r)
        for (size_t i = 0; i < dom.size(); ++i)
            G.at(r, i) = evaluate_basis_function(ctx, basis[r], dom.point(i), dom.coord_count);
    return G;
}

inline std::vector<Fe> encode(const Field& F, const Matrix& G, const std::vector<Fe>& message) {
    require(message.size() == G.rows, "encode: message length != basis size");
    std::vector<Fe> c(G.cols, F.zero());
    for (size_t r = 0; r < G.rows; ++r) {
        if (F.is_zero(message[r])) continue;
        for (size_t i = 0; i < G.cols; ++i) c[i] = F.add(c[i], F.mul(message[r], G.at(r, i)));
    }
    return c;
}

// Row space of a generator matrix in reduced row echelon form; answers rank and
// membership queries (the rank-test membership oracle used throughout the tests).
class RowSpace {
  public:
    RowSpace() = default;
    RowSpace(const Field& F, const Matrix& G) : F_(&F), cols_(G.cols) {
        for (size_t r = 0; r < G.rows; ++r) {
            std::vector<Fe> row(G.a.begin() + r * G.cols, G.a.begin() + (r + 1) * G.cols);
            insert_(row);
        }
    }

    size_t rank() const { return rows_.size(); }
    size_t cols() const { return cols_; }

    bool contains(const std::vector<Fe>& v) const {
        require(v.size() == cols_, "rowspace: length mismatch");
        std::vector<Fe> w = v;
        reduce_(w);
        for (Fe x : w)
            if (!F_->is_zero(x)) return false;
        return true;
    }

  private:
    const Field* F_ = nullptr;
    size_t cols_ = 0;
    std::vector<std::vector<Fe>> rows_;  // each with leading 1 at pivot
    std::vector<size_t> pivots_;

    void reduce_(std::vector<Fe>& w) const {
        for (size_t i = 0; i < rows_.size(); ++i) {
            Fe c = w[pivots_[i]];
            if (F_->is_zero(c)) continue;
            for (size_t j = 0; j < cols_; ++j) w[j] = F_->sub(w[j], F_->mul(c, rows_[i][j]));
        }
    }
    void insert_(std::vector<Fe>& row) {
        reduce_(row);
        size_t piv = cols_;
        for (size_t j = 0; j < cols_; ++j)
            if (!F_->is_zero(row[j])) { piv = j; break; }
        if (piv == cols_) return;
        Fe inv = F_->inv(row[piv]);
        for (size_t j = 0; j < cols_; ++j) row[j] = F_->mul(row[j], inv);
        rows_.push_back(row);
        pivots_.push_back(piv);
    }
};

// Exact relative minimum distance by enumerating all nonzero codewords.
// Desk scale: requires |F|^k <= 2^24.
inline Rat min_distance_exhaustive(const Field& F, const Matrix& G) {
    u128 total = 1;
    for (size_t r = 0; r < G.rows; ++r) {
        total *= F.cardinality();
        require(total <= (u128(1) << 24), "min_distance_exhaustive: instance too large (|F|^k > 2^24)");
    }
    require(G.rows >= 1, "min_distance_exhaustive: dimension 0");
    size_t best = G.cols + 1;
    std::vector<Fe> msg(G.rows, F.zero());
    for (u128 code = 1; code < total; ++code) {
        u128 c = code;
        for (size_t r = 0; r < G.rows; ++r) {
            msg[r] = F.element(c % F.cardinality());
            c /= F.cardinality();
        }
        std::vector<Fe> cw = encode(F, G, msg);
        size_t w = 0;
        for (Fe x : cw)
            if (!F.is_zero(x)) ++w;
        if (w < best) best = w;
    }
    return Rat(i128(best), i128(G.cols));
}

}  // namespace agiopp
