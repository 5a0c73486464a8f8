#pragma once

// Polynomials and rational functions over a finite field, factorization by
// trial division, and the places of the rational function field F_q(t).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "capitula/error.hpp"
#include "capitula/fforacle/gf.hpp"

namespace capitula::fforacle {

/// Ascending coefficients with no trailing zeros; the zero polynomial is empty.
using Poly = std::vector<Elem>;

namespace poly {

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int deg(Poly const& a) { return static_cast<int>(a.size()) - 1; }
inline bool is_zero(Poly const& a) { return a.empty(); }
inline Elem lead(Poly const& a) { return a.empty() ? 0 : a.back(); }
inline Poly constant(Elem c) { return c ? Poly{c} : Poly{}; }
inline Poly monomial(Elem c, int k) {
    if (!c) return {};
    Poly r(static_cast<std::size_t>(k) + 1, 0);
    r[k] = c;
    return r;
}
/// t - a
inline Poly linear(GF const& F, Elem a) { return a ? Poly{F.neg(a), 1} : Poly{0, 1}; }

inline Poly add(GF const& F, Poly const& a, Poly const& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}
inline Poly neg(GF const& F, Poly a) {
    for (auto& c : a) c = F.neg(c);
    return a;
}
inline Poly sub(GF const& F, Poly const& a, Poly const& b) { return add(F, a, neg(F, b)); }
inline Poly scale(GF const& F, Poly a, Elem c) {
    if (!c) return {};
    for (auto& x : a) x = F.mul(x, c);
    return a;
}
/// a * t^k
inline Poly shift(Poly const& a, int k) {
    if (a.empty()) return {};
    Poly r(static_cast<std::size_t>(k), 0);
    r.insert(r.end(), a.begin(), a.end());
    return r;
}
inline Poly mul(GF const& F, Poly const& a, Poly const& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}
inline std::pair<Poly, Poly> divmod(GF const& F, Poly a, Poly const& b) {
    if (b.empty()) throw PreconditionError("polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    Poly q(a.size() - b.size() + 1, 0);
    Elem const inv = F.inv(b.back());
    for (int i = deg(a); i >= deg(b); --i) {
        Elem c = F.mul(a[i], inv);
        if (!c) continue;
        int s = i - deg(b);
        q[s] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[s + j] = F.sub(a[s + j], F.mul(c, b[j]));
    }
    trim(a);
    trim(q);
    return {q, a};
}
inline Poly mod(GF const& F, Poly const& a, Poly const& b) { return divmod(F, a, b).second; }
inline Poly monic(GF const& F, Poly const& a) { return a.empty() ? a : scale(F, a, F.inv(a.back())); }
inline Poly gcd(GF const& F, Poly a, Poly b) {
    while (!b.empty()) {
        Poly r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}
/// (g, x, y) with a x + b y = g monic.
inline std::tuple<Poly, Poly, Poly> ext_gcd(GF const& F, Poly a, Poly b) {
    Poly x0{1}, y0{}, x1{}, y1{1};
    while (!b.empty()) {
        auto [q, r] = divmod(F, a, b);
        a = std::move(b);
        b = std::move(r);
        Poly t = sub(F, x0, mul(F, q, x1));
        x0 = std::move(x1);
        x1 = std::move(t);
        t = sub(F, y0, mul(F, q, y1));
        y0 = std::move(y1);
        y1 = std::move(t);
    }
    if (a.empty()) return {a, x0, y0};
    Elem inv = F.inv(a.back());
    return {scale(F, a, inv), scale(F, x0, inv), scale(F, y0, inv)};
}
/// a^-1 mod m
inline Poly inv_mod(GF const& F, Poly const& a, Poly const& m) {
    auto [g, x, y] = ext_gcd(F, mod(F, a, m), m);
    if (g != Poly{1}) throw PreconditionError("polynomial is not invertible modulo m");
    return mod(F, x, m);
}
inline Poly pow(GF const& F, Poly base, std::uint64_t e) {
    Poly r{1};
    while (e) {
        if (e & 1u) r = mul(F, r, base);
        e >>= 1u;
        if (e) base = mul(F, base, base);
    }
    return r;
}
inline Poly pow_mod(GF const& F, Poly base, std::uint64_t e, Poly const& m) {
    Poly r = mod(F, Poly{1}, m);
    base = mod(F, base, m);
    while (e) {
        if (e & 1u) r = mod(F, mul(F, r, base), m);
        e >>= 1u;
        if (e) base = mod(F, mul(F, base, base), m);
    }
    return r;
}
inline Poly derivative(GF const& F, Poly const& a) {
    Poly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(F.mul(a[i], F.from_int(static_cast<long long>(i))));
    trim(r);
    return r;
}
inline Elem eval(GF const& F, Poly const& a, Elem x) {
    Elem v = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) v = F.add(F.mul(v, x), *it);
    return v;
}
/// Coefficients carried into a larger field.
inline Poly map(Embedding const& E, Poly const& a) {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = E(a[i]);
    return r;
}
/// Coefficients pulled back from a larger field (they must lie in the subfield).
inline Poly pullback(Embedding const& E, Poly const& a) {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = E.preimage(a[i]);
    return r;
}
/// t^n a(1/t) for n >= deg a.
inline Poly reverse(Poly const& a, int n) {
    Poly r(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[n - static_cast<int>(i)] = a[i];
    trim(r);
    return r;
}
inline Poly from_ints(GF const& F, std::vector<long long> const& c) {
    Poly r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) r[i] = F.from_int(c[i]);
    trim(r);
    return r;
}
/// "t^2+2*t+1"; coefficients are printed as field element codes.
inline std::string to_string(Poly const& a, std::string const& var = "t") {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = deg(a); i >= 0; --i) {
        Elem c = a[i];
        if (!c) continue;
        if (!first) os << '+';
        first = false;
        if (i == 0) {
            os << c;
            continue;
        }
        if (c != 1) os << c << '*';
        os << var;
        if (i > 1) os << '^' << i;
    }
    return os.str();
}

}  // namespace poly

/// num/den in lowest terms with den monic.
struct RatFunc {
    Poly num;
    Poly den{1};

    static RatFunc make(GF const& F, Poly num, Poly den) {
        if (den.empty()) throw PreconditionError("rational function with zero denominator");
        if (num.empty()) return {{}, {1}};
        Poly g = poly::gcd(F, num, den);
        if (g.size() > 1) {
            num = poly::divmod(F, num, g).first;
            den = poly::divmod(F, den, g).first;
        }
        Elem inv = F.inv(den.back());
        return {poly::scale(F, num, inv), poly::scale(F, den, inv)};
    }
    static RatFunc from_poly(Poly p) { return {std::move(p), {1}}; }

    bool is_zero() const { return num.empty(); }
    bool is_constant() const { return num.size() <= 1 && den.size() == 1; }
    friend bool operator==(RatFunc const&, RatFunc const&) = default;

    std::string to_string() const {
        if (den == Poly{1}) return poly::to_string(num);
        return "(" + poly::to_string(num) + ")/(" + poly::to_string(den) + ")";
    }
};

namespace ratfunc {

inline RatFunc add(GF const& F, RatFunc const& a, RatFunc const& b) {
    return RatFunc::make(F, poly::add(F, poly::mul(F, a.num, b.den), poly::mul(F, b.num, a.den)),
                         poly::mul(F, a.den, b.den));
}
inline RatFunc neg(GF const& F, RatFunc a) { return {poly::neg(F, a.num), a.den}; }
inline RatFunc sub(GF const& F, RatFunc const& a, RatFunc const& b) { return add(F, a, neg(F, b)); }
inline RatFunc mul(GF const& F, RatFunc const& a, RatFunc const& b) {
    return RatFunc::make(F, poly::mul(F, a.num, b.num), poly::mul(F, a.den, b.den));
}
inline RatFunc div(GF const& F, RatFunc const& a, RatFunc const& b) {
    if (b.is_zero()) throw PreconditionError("rational function division by zero");
    return RatFunc::make(F, poly::mul(F, a.num, b.den), poly::mul(F, a.den, b.num));
}
inline RatFunc pow(GF const& F, RatFunc const& a, std::uint64_t e) {
    return RatFunc::make(F, poly::pow(F, a.num, e), poly::pow(F, a.den, e));
}

}  // namespace ratfunc

/// A place of F_q(t): a monic irreducible polynomial, or the pole of t.
/// `root` is a fixed root of `poly` in GF(q^degree) (the smallest code among the roots).
struct Place {
    bool infinite = false;
    Poly poly;
    int degree = 1;
    Elem root = 0;

    static Place infinity() { return {true, {}, 1, 0}; }

    std::string name() const { return infinite ? "inf" : poly::to_string(poly); }

    /// By degree, infinity first, then lexicographic on ascending coefficients.
    friend bool operator<(Place const& a, Place const& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.infinite != b.infinite) return a.infinite;
        return a.poly < b.poly;
    }
    friend bool operator==(Place const& a, Place const& b) {
        return a.infinite == b.infinite && a.poly == b.poly;
    }
};

/// The constant field F_q = GF(p^k) with its extensions GF(q^d).
class BaseField {
public:
    explicit BaseField(std::int64_t q) : q_(q) {
        std::int64_t p = 0;
        for (std::int64_t d = 2; d * d <= q && !p; ++d)
            if (q % d == 0) p = d;
        if (q < 2) throw PreconditionError("q must be a prime power");
        if (!p) p = q;
        std::int64_t x = q;
        k_ = 0;
        while (x % p == 0) {
            x /= p;
            ++k_;
        }
        if (x != 1) throw PreconditionError("q must be a prime power");
        p_ = static_cast<int>(p);
        F_ = field(p_, k_);
    }

    std::int64_t q() const { return q_; }
    int p() const { return p_; }
    int k() const { return k_; }
    GF const& F() const { return *F_; }
    FieldPtr const& ptr() const { return F_; }
    /// GF(q^d)
    FieldPtr extension(int d) const { return field(p_, k_ * d); }
    std::shared_ptr<Embedding const> embed(int d) const { return embedding(F_, extension(d)); }
    /// Embedding GF(q^a) -> GF(q^b)
    std::shared_ptr<Embedding const> embed(int a, int b) const { return embedding(extension(a), extension(b)); }

    /// Finite places of degree d in canonical order.
    std::vector<Place> const& places_of_degree(int d) const {
        std::lock_guard<std::mutex> lock(*mu_);
        auto& slot = (*cache_)[d];
        if (!slot.empty() || d < 1) return slot;
        auto L = extension(d);
        auto E = embed(d);
        std::vector<Place> out;
        for (Elem th = 0; th < L->size(); ++th) {
            Elem x = th, mn = th;
            int orbit = 1;
            for (;;) {
                x = L->frobenius(x, k_);
                if (x == th) break;
                mn = std::min(mn, x);
                ++orbit;
            }
            if (orbit != d || mn != th) continue;
            Poly m{1};
            x = th;
            for (int i = 0; i < d; ++i) {
                m = poly::mul(*L, m, poly::linear(*L, x));
                x = L->frobenius(x, k_);
            }
            out.push_back({false, poly::pullback(*E, m), d, th});
        }
        std::sort(out.begin(), out.end());
        slot = std::move(out);
        return slot;
    }

    /// All places of degree <= d: infinity and the finite ones, canonical order.
    std::vector<Place> places_up_to(int d) const {
        std::vector<Place> out{Place::infinity()};
        for (int e = 1; e <= d; ++e) {
            auto const& ps = places_of_degree(e);
            out.insert(out.end(), ps.begin(), ps.end());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// The place of a monic irreducible polynomial.
    Place place_of(Poly const& irreducible) const {
        int d = poly::deg(irreducible);
        if (d < 1 || irreducible.back() != 1) throw PreconditionError("place_of: need a monic polynomial of degree >= 1");
        for (auto const& pl : places_of_degree(d))
            if (pl.poly == irreducible) return pl;
        throw PreconditionError("place_of: polynomial is not irreducible");
    }

    /// Monic irreducible factorization by trial division, with the leading coefficient.
    std::pair<Elem, std::vector<std::pair<Place, int>>> factor(Poly a) const {
        if (a.empty()) throw PreconditionError("factor: zero polynomial");
        Elem lc = a.back();
        a = poly::monic(*F_, a);
        std::vector<std::pair<Place, int>> out;
        for (int d = 1; 2 * d <= poly::deg(a); ++d) {
            for (auto const& pl : places_of_degree(d)) {
                if (2 * d > poly::deg(a)) break;
                int m = 0;
                for (;;) {
                    auto [qq, r] = poly::divmod(*F_, a, pl.poly);
                    if (!r.empty()) break;
                    a = std::move(qq);
                    ++m;
                }
                if (m) out.emplace_back(pl, m);
            }
        }
        if (poly::deg(a) >= 1) {
            Place pl = place_of(a);
            bool merged = false;
            for (auto& [p2, m] : out)
                if (p2 == pl) {
                    ++m;
                    merged = true;
                }
            if (!merged) out.emplace_back(pl, 1);
        }
        std::sort(out.begin(), out.end(), [](auto const& x, auto const& y) { return x.first < y.first; });
        return {lc, out};
    }

    /// Value of a at the root of `pl` (finite), in GF(q^deg).
    Elem eval_at(Poly const& a, Place const& pl) const {
        auto E = embed(pl.degree);
        return poly::eval(*E->big(), poly::map(*E, a), pl.root);
    }

private:
    std::int64_t q_;
    int p_ = 0, k_ = 0;
    FieldPtr F_;
    std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    std::shared_ptr<std::map<int, std::vector<Place>>> cache_ = std::make_shared<std::map<int, std::vector<Place>>>();
};

/// Order of vanishing of a nonzero polynomial at a finite place.
inline int valuation(GF const& F, Poly a, Poly const& pi) {
    if (a.empty()) throw PreconditionError("valuation of zero");
    int v = 0;
    for (;;) {
        auto [q, r] = poly::divmod(F, a, pi);
        if (!r.empty()) return v;
        a = std::move(q);
        ++v;
    }
}

/// Valuation of a rational function at a place.
inline int valuation(GF const& F, RatFunc const& f, Place const& pl) {
    if (f.is_zero()) throw PreconditionError("valuation of zero");
    if (pl.infinite) return poly::deg(f.den) - poly::deg(f.num);
    return valuation(F, f.num, pl.poly) - valuation(F, f.den, pl.poly);
}

}  // namespace capitula::fforacle
