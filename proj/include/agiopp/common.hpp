#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace agiopp {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

enum class errc {
    config,    // bad parameters, violated preconditions
    protocol,  // verification reject carried as error (rare; rejects are usually values)
    internal,  // broken invariant
};

struct error : std::runtime_error {
    errc kind;
    error(errc k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail(errc k, const std::string& msg) { throw error(k, msg); }

inline void require(bool cond, const std::string& msg, errc k = errc::config) {
    if (!cond) fail(k, msg);
}

inline std::string u128_str(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) { s.insert(s.begin(), char('0' + int(v % 10))); v /= 10; }
    return s;
}

// floor division toward -inf, n > 0
inline i64 floor_div(i64 a, i64 n) {
    i64 q = a / n, r = a % n;
    return (r != 0 && r < 0) ? q - 1 : q;
}

inline i64 ceil_div_i(i64 a, i64 n) { return -floor_div(-a, n); }

// exact rational on i128, only normalized on demand (values stay tiny here)
struct Rat {
    i128 num = 0;
    i128 den = 1;

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i128 n, i128 d) : num(n), den(d) {
        if (den < 0) { num = -num; den = -den; }
        reduce();
    }

    static i128 gcd(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) { i128 t = a % b; a = b; b = t; }
        return a;
    }
    void reduce() {
        i128 g = gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) { return Rat(a.num * b.den, a.den * b.num); }
    friend bool operator==(Rat a, Rat b) { return a.num * b.den == b.num * a.den; }
    friend bool operator!=(Rat a, Rat b) { return !(a == b); }
    friend bool operator<(Rat a, Rat b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rat a, Rat b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(Rat a, Rat b) { return b < a; }
    friend bool operator>=(Rat a, Rat b) { return b <= a; }

    double to_double() const { return double(num) / double(den); }
    std::string str() const {
        std::string s = (num < 0 ? "-" : "") + u128_str(u128(num < 0 ? -num : num));
        if (den != 1) s += "/" + u128_str(u128(den));
        return s;
    }
};

}  // namespace agiopp
