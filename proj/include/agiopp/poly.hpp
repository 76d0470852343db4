#pragma once

#include "field.hpp"

namespace agiopp {

// Dense univariate polynomial, coefficients low -> high. Zero polynomial = empty list.
struct Poly {
    std::vector<Fe> c;

    size_t size() const { return c.size(); }
    bool is_zero() const { return c.empty(); }
    int degree() const { return int(c.size()) - 1; }

    void trim(const Field& F) {
        while (!c.empty() && F.is_zero(c.back())) c.pop_back();
    }
};

inline Fe poly_eval(const Field& F, const Poly& a, Fe x) {
    Fe r = F.zero();
    for (size_t i = a.c.size(); i-- > 0;) r = F.add(F.mul(r, x), a.c[i]);
    return r;
}

inline std::vector<Fe> poly_eval_many(const Field& F, const Poly& a, const std::vector<Fe>& xs) {
    std::vector<Fe> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = poly_eval(F, a, xs[i]);
    return out;
}

// Lagrange interpolation through (xs[i], ys[i]), degree < |xs|. The protocol only
// ever interpolates tiny degrees (< p_i), so O(p^2) is the right tool here.
// Errors on duplicate abscissae.
inline Poly interpolate(const Field& F, const std::vector<Fe>& xs, const std::vector<Fe>& ys) {
    require(xs.size() == ys.size(), "interpolate: |xs| != |ys|");
    require(!xs.empty(), "interpolate: empty point set");
    size_t n = xs.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            require(xs[i] != xs[j], "interpolate: duplicate abscissae");

    // m = prod (X - xs[i])
    std::vector<Fe> m{F.one()};
    for (size_t i = 0; i < n; ++i) {
        std::vector<Fe> nm(m.size() + 1, F.zero());
        for (size_t j = 0; j < m.size(); ++j) {
            nm[j + 1] = F.add(nm[j + 1], m[j]);
            nm[j] = F.sub(nm[j], F.mul(m[j], xs[i]));
        }
        m.swap(nm);
    }

    Poly out;
    out.c.assign(n, F.zero());
    std::vector<Fe> q(n);
    for (size_t i = 0; i < n; ++i) {
        // q = m / (X - xs[i]) by synthetic division
        Fe carry = F.zero();
        for (size_t j = n; j-- > 0;) {
            Fe coeff = F.add(m[j + 1], F.mul(carry, xs[i]));
            q[j] = coeff;
            carry = coeff;
        }
        // weight = 1 / prod_{j != i} (xs[i] - xs[j]) = 1 / q(xs[i])
        Fe denom = F.zero();
        {
            Fe r = F.zero();
            for (size_t j = n; j-- > 0;) r = F.add(F.mul(r, xs[i]), q[j]);
            denom = r;
        }
        Fe scale = F.div(ys[i], denom);
        for (size_t j = 0; j < n; ++j) out.c[j] = F.add(out.c[j], F.mul(q[j], scale));
    }
    out.trim(F);
    return out;
}

}  // namespace agiopp
