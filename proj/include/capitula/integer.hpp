#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "capitula/error.hpp"

namespace capitula {

using Integer = boost::multiprecision::cpp_int;

inline Integer abs(Integer const& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(Integer const& a, Integer const& b) {
    return boost::multiprecision::gcd(abs(a), abs(b));
}

inline Integer lcm(Integer const& a, Integer const& b) {
    if (a == 0 || b == 0) return 0;
    return abs(a / gcd(a, b) * b);
}

/// Non-negative remainder, m > 0.
inline Integer mod(Integer const& a, Integer const& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(Integer a, Integer b) {
    Integer x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Integer q = a / b;
        Integer r = a - q * b;
        a = b;
        b = r;
        Integer t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) return {-a, -x0, -y0};
    return {a, x0, y0};
}

/// gcd of a nonempty list.
inline Integer gcd_of(std::span<Integer const> xs) {
    if (xs.empty()) throw PreconditionError("gcd of an empty list");
    Integer g = 0;
    for (auto const& x : xs) g = gcd(g, x);
    return g;
}

/// lcm of a nonempty list.
inline Integer lcm_of(std::span<Integer const> xs) {
    if (xs.empty()) throw PreconditionError("lcm of an empty list");
    Integer l = 1;
    for (auto const& x : xs) l = lcm(l, x);
    return l;
}

inline Integer product_of(std::span<Integer const> xs) {
    Integer p = 1;
    for (auto const& x : xs) p *= x;
    return p;
}

inline Integer ipow(Integer base, unsigned e) {
    Integer r = 1;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

inline Integer powmod(Integer base, Integer e, Integer const& m) {
    Integer r = 1 % m;
    base = mod(base, m);
    while (e > 0) {
        if (e & 1) r = r * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return r;
}

/// Inverse of a modulo m; a must be a unit.
inline Integer invmod(Integer const& a, Integer const& m) {
    auto [g, x, y] = ext_gcd(mod(a, m), m);
    (void)y;
    if (g != 1) throw PreconditionError("invmod: not a unit");
    return mod(x, m);
}

inline bool is_prime(Integer const& n) {
    if (n < 2) return false;
    for (Integer d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Returns (p, k) with q = p^k, or (0, 0) if q is not a prime power.
inline std::pair<std::int64_t, int> prime_power(std::int64_t q) {
    if (q < 2) return {0, 0};
    std::int64_t p = 0;
    for (std::int64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) return {q, 1};
    int k = 0;
    while (q % p == 0) {
        q /= p;
        ++k;
    }
    if (q != 1) return {0, 0};
    return {p, k};
}

inline std::int64_t to_i64(Integer const& a) {
    if (a > INT64_MAX || a < INT64_MIN) throw ResourceError("integer does not fit in 64 bits");
    return a.convert_to<std::int64_t>();
}

inline std::string to_string(Integer const& a) { return a.str(); }

inline std::vector<Integer> to_integers(std::span<std::int64_t const> xs) {
    return {xs.begin(), xs.end()};
}

}  // namespace capitula
