#pragma once

#include <map>

#include "field.hpp"

namespace agiopp {

// Distinguished points that may support a divisor:
//   infinity     — the unique point at infinity of the level curve
//   kummer_root  — P_l = (alpha_l, 0) on a Kummer curve (index = l, 1-based)
//   tower_origin — P^(i), the common zero of x_0..x_i on a tower curve
//   line_finite  — a finite point of the projective line, identified by its coordinate code
struct PointKey {
    enum class Kind : u8 { infinity = 0, kummer_root = 1, tower_origin = 2, line_finite = 3 };
    Kind kind = Kind::infinity;
    u32 index = 0;
    u128 code = 0;

    static PointKey inf() { return PointKey{Kind::infinity, 0, 0}; }
    static PointKey root(u32 l) { return PointKey{Kind::kummer_root, l, 0}; }
    static PointKey origin() { return PointKey{Kind::tower_origin, 0, 0}; }
    static PointKey line(u128 code) { return PointKey{Kind::line_finite, 0, code}; }

    friend bool operator<(const PointKey& a, const PointKey& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.index != b.index) return a.index < b.index;
        return a.code < b.code;
    }
    friend bool operator==(const PointKey& a, const PointKey& b) {
        return a.kind == b.kind && a.index == b.index && a.code == b.code;
    }
};

// Formal integer combination of distinguished points on a level curve.
struct Divisor {
    int level = 0;
    std::map<PointKey, i64> coeffs;

    i64 at(const PointKey& k) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? 0 : it->second;
    }
    void set(const PointKey& k, i64 v) {
        if (v == 0)
            coeffs.erase(k);
        else
            coeffs[k] = v;
    }
    void add_to(const PointKey& k, i64 v) { set(k, at(k) + v); }

    i64 degree() const {
        i64 d = 0;
        for (auto& [k, v] : coeffs) d += v;
        return d;
    }
    bool is_effective() const {
        for (auto& [k, v] : coeffs)
            if (v < 0) return false;
        return true;
    }
    // D <= E  iff  E - D is effective
    bool leq(const Divisor& E) const {
        Divisor diff = E;
        for (auto& [k, v] : coeffs) diff.add_to(k, -v);
        return diff.is_effective();
    }

    friend Divisor operator+(Divisor a, const Divisor& b) {
        for (auto& [k, v] : b.coeffs) a.add_to(k, v);
        return a;
    }
    friend Divisor operator-(Divisor a, const Divisor& b) {
        for (auto& [k, v] : b.coeffs) a.add_to(k, -v);
        return a;
    }
    friend Divisor operator*(i64 s, Divisor a) {
        std::map<PointKey, i64> out;
        for (auto& [k, v] : a.coeffs)
            if (s * v != 0) out[k] = s * v;
        a.coeffs = std::move(out);
        return a;
    }
    friend bool operator==(const Divisor& a, const Divisor& b) { return a.coeffs == b.coeffs; }

    std::string str() const {
        if (coeffs.empty()) return "0";
        std::string s;
        for (auto& [k, v] : coeffs) {
            if (!s.empty()) s += " + ";
            s += std::to_string(v) + "*";
            switch (k.kind) {
                case PointKey::Kind::infinity: s += "Pinf"; break;
                case PointKey::Kind::kummer_root: s += "P" + std::to_string(k.index); break;
                case PointKey::Kind::tower_origin: s += "P0"; break;
                case PointKey::Kind::line_finite: s += "P(" + u128_str(k.code) + ")"; break;
            }
        }
        return s;
    }
};

// floor divisor: coefficient-wise floor(n_P / n), Definition of the floor operation on divisors.
inline Divisor floor_divisor(const Divisor& D, i64 n) {
    require(n >= 1, "floor_divisor: n must be positive");
    Divisor out;
    out.level = D.level;
    for (auto& [k, v] : D.coeffs) out.set(k, floor_div(v, n));
    return out;
}

}  // namespace agiopp
