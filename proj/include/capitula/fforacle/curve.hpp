#pragma once

// Cyclic covers of the projective line over F_q:
//   Artin-Schreier  y^p - y = Q(t)   (degree p = char F_q)
//   Kummer          y^l = f(t)       (l prime, l | q - 1)
// with ramification, splitting of places, point counts and the L-polynomial.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "capitula/error.hpp"
#include "capitula/fforacle/gf.hpp"
#include "capitula/fforacle/poly.hpp"
#include "capitula/integer.hpp"

namespace capitula::fforacle {

enum class CurveKind { ArtinSchreier, Kummer };
enum class SplitType { Split, Inert, Ramified };

inline char const* to_string(SplitType s) {
    switch (s) {
        case SplitType::Split: return "split";
        case SplitType::Inert: return "inert";
        case SplitType::Ramified: return "ramified";
    }
    return "?";
}

struct RamifiedPlace {
    Place place;
    int e = 1;
    int different = 0;
    int order = 0;  // pole order of Q (Artin-Schreier) or multiplicity in f (Kummer)
};

/// Q + (h^p - h) with every pole order prime to p.
inline RatFunc as_reduce(BaseField const& K, RatFunc Q) {
    GF const& F = K.F();
    int const p = K.p();
    if (Q.is_zero()) throw DegenerateExtension("Q = 0: the extension splits");
    auto subtract_wp = [&](RatFunc const& h) {
        Q = ratfunc::sub(F, Q, ratfunc::sub(F, ratfunc::pow(F, h, static_cast<std::uint64_t>(p)), h));
    };

    if (poly::deg(Q.den) > 0) {
        for (auto const& [pl, mult] : K.factor(Q.den).second) {
            int m = mult;
            while (m > 0 && m % p == 0) {
                Poly pim = poly::pow(F, pl.poly, static_cast<std::uint64_t>(m));
                Poly B = poly::divmod(F, Q.den, pim).first;
                Poly c = poly::mod(F, poly::mul(F, Q.num, poly::inv_mod(F, B, pl.poly)), pl.poly);
                // p-th root in F[t]/pi: x -> x^(q^d / p)
                std::uint64_t e = 1;
                for (int i = 0; i < K.k() * pl.degree - 1; ++i) e *= static_cast<std::uint64_t>(p);
                Poly gamma = poly::pow_mod(F, c, e, pl.poly);
                subtract_wp(RatFunc::make(F, gamma, poly::pow(F, pl.poly, static_cast<std::uint64_t>(m / p))));
                m = Q.den.empty() ? 0 : valuation(F, Q.den, pl.poly);
            }
        }
    }
    for (;;) {
        int m = poly::deg(Q.num) - poly::deg(Q.den);
        if (Q.is_zero() || m <= 0 || m % p != 0) break;
        Elem c = F.root_p(Q.num.back());
        subtract_wp(RatFunc::from_poly(poly::monomial(c, m / p)));
    }
    if (Q.is_zero()) throw DegenerateExtension("Q is of the form h^p - h: the extension splits");
    if (Q.is_constant() && F.trace(Q.num[0]) == 0)
        throw DegenerateExtension("constant Q of trace zero: the extension splits");
    return Q;
}

class Curve {
public:
    /// y^p - y = Q over F_q; Q is reduced on construction.
    static Curve artin_schreier(std::int64_t q, RatFunc const& Q) {
        Curve c(q);
        c.kind_ = CurveKind::ArtinSchreier;
        c.n_ = c.K_.p();
        c.input_ = Q;
        c.Q_ = as_reduce(c.K_, Q);
        c.constant_extension_ = c.Q_.is_constant();
        c.init();
        return c;
    }

    /// y^l = f over F_q; f is replaced by a polynomial with exponents in 1..l-1.
    static Curve kummer(std::int64_t q, int ell, RatFunc const& f) {
        Curve c(q);
        c.kind_ = CurveKind::Kummer;
        if (ell < 2 || !is_prime(ell)) throw Unsupported("Kummer curves are implemented for prime l only");
        if ((q - 1) % ell != 0) throw PreconditionError("Kummer curve needs l | q - 1");
        if (f.is_zero()) throw DegenerateExtension("f = 0");
        c.n_ = ell;
        c.input_ = f;
        GF const& F = c.K_.F();
        Poly g = poly::mul(F, f.num, poly::pow(F, f.den, static_cast<std::uint64_t>(ell - 1)));
        auto [lc, facs] = c.K_.factor(g);
        Poly norm{lc};
        for (auto const& [pl, m] : facs)
            if (m % ell) norm = poly::mul(F, norm, poly::pow(F, pl.poly, static_cast<std::uint64_t>(m % ell)));
        c.Q_ = RatFunc::from_poly(norm);
        if (poly::deg(norm) == 0) {
            if (F.pow(lc, static_cast<std::uint64_t>((q - 1) / ell)) == 1)
                throw DegenerateExtension("f is an l-th power: the extension splits");
            c.constant_extension_ = true;
        }
        c.zeta_ = F.exp(static_cast<std::uint64_t>((q - 1) / ell));
        c.init();
        return c;
    }

    CurveKind kind() const { return kind_; }
    BaseField const& base() const { return K_; }
    std::int64_t q() const { return K_.q(); }
    int p() const { return K_.p(); }
    /// Degree of the cover, p or l.
    int n() const { return n_; }
    /// Reduced Q, or normalized f.
    RatFunc const& equation() const { return Q_; }
    RatFunc const& input() const { return input_; }
    /// The cover is a constant field extension of degree n (not geometric).
    bool constant_field_extension() const { return constant_extension_; }
    Elem zeta() const { return zeta_; }

    std::vector<RamifiedPlace> const& ramification() const { return ram_; }
    int genus() const { return genus_; }

    std::string description() const {
        std::string lhs = kind_ == CurveKind::Kummer ? "y^" + std::to_string(n_)
                          : p() == 2              ? "y^2+y"
                                                  : "y^" + std::to_string(n_) + "-y";
        return lhs + " = " + Q_.to_string() + " over F_" + std::to_string(q());
    }

    std::optional<RamifiedPlace> ramified_at(Place const& pl) const {
        for (auto const& r : ram_)
            if (r.place == pl) return r;
        return std::nullopt;
    }

    /// Value governing the fibre above an unramified place: Q(P) or f(P), in GF(q^deg P).
    Elem fibre_value(Place const& pl) const {
        if (ramified_at(pl)) throw PreconditionError("fibre_value: place is ramified");
        GF const& F = K_.F();
        if (pl.infinite) {
            if (kind_ == CurveKind::Kummer) return Q_.num.back();
            return poly::deg(Q_.num) < poly::deg(Q_.den) ? Elem{0} : F.div(Q_.num.back(), Q_.den.back());
        }
        auto L = K_.extension(pl.degree);
        Elem num = K_.eval_at(Q_.num, pl), den = K_.eval_at(Q_.den, pl);
        return L->div(num, den);
    }

    SplitType splitting(Place const& pl) const {
        if (ramified_at(pl)) return SplitType::Ramified;
        return fibre(pl).empty() ? SplitType::Inert : SplitType::Split;
    }
    int residue_degree(Place const& pl) const { return splitting(pl) == SplitType::Inert ? n_ : 1; }
    int ramification_index(Place const& pl) const { return splitting(pl) == SplitType::Ramified ? n_ : 1; }

    /// For a split place, the n values of y (y t^-deg f/l at infinity for Kummer) at the
    /// chosen root, in GF(q^deg P); empty when the place is inert.
    std::vector<Elem> fibre(Place const& pl) const {
        int const d = pl.infinite ? 1 : pl.degree;
        auto L = K_.extension(d);
        Elem c = fibre_value(pl);
        std::vector<Elem> out;
        if (kind_ == CurveKind::ArtinSchreier) {
            if (L->trace(c) != 0) return out;
            for (Elem x = 0; x < L->size(); ++x)
                if (L->sub(L->pow(x, static_cast<std::uint64_t>(n_)), x) == c) out.push_back(x);
        } else {
            if (c == 0) throw Error("fibre: f vanishes at an unramified place");
            if (L->log(c) % static_cast<std::uint32_t>(n_) != 0) return out;
            Elem eta = L->exp(L->log(c) / static_cast<std::uint32_t>(n_));
            Elem z = (*K_.embed(d))(zeta_);
            for (int j = 0; j < n_; ++j) {
                out.push_back(eta);
                eta = L->mul(eta, z);
            }
            std::sort(out.begin(), out.end());
        }
        if (static_cast<int>(out.size()) != n_) throw Error("fibre: wrong number of solutions");
        return out;
    }

    /// The generator of the Galois group on fibre values: y -> y + 1 or y -> zeta y.
    Elem sigma(Elem eta, int d) const {
        auto L = K_.extension(d);
        if (kind_ == CurveKind::ArtinSchreier) return L->add(eta, 1);
        return L->mul(eta, (*K_.embed(d))(zeta_));
    }

    /// Number of degree-one places over F_{q^m}.
    Integer count_points(int m) const {
        require_geometric();
        if (m < 1) throw PreconditionError("count_points: m >= 1");
        auto L = K_.extension(m);
        auto E = K_.embed(m);
        Poly num = poly::map(*E, Q_.num), den = poly::map(*E, Q_.den);
        std::uint64_t const pw = (static_cast<std::uint64_t>(L->size()) - 1) / static_cast<std::uint64_t>(n_);
        auto fibre_count = [&](Elem c) -> int {
            if (kind_ == CurveKind::ArtinSchreier) return L->trace(c) == 0 ? n_ : 0;
            if (c == 0) return 1;
            return L->pow(c, pw) == 1 ? n_ : 0;
        };
        Integer N = 0;
        for (Elem x = 0; x < L->size(); ++x) {
            Elem dv = poly::eval(*L, den, x);
            if (dv == 0) {
                N += 1;
                continue;
            }
            N += fibre_count(L->div(poly::eval(*L, num, x), dv));
        }
        if (ramified_at(Place::infinity())) N += 1;
        else N += fibre_count((*E)(fibre_value(Place::infinity())));
        return N;
    }

    /// Coefficients a_0..a_2g of L(T), from N_1..N_g and the functional equation.
    std::vector<Integer> l_polynomial() const {
        int const g = genus_;
        std::vector<Integer> a(static_cast<std::size_t>(2 * g) + 1, 0);
        a[0] = 1;
        std::vector<Integer> s(static_cast<std::size_t>(g) + 1, 0);
        for (int m = 1; m <= g; ++m) s[m] = ipow(q(), static_cast<unsigned>(m)) + 1 - count_points(m);
        for (int i = 1; i <= g; ++i) {
            Integer acc = 0;
            for (int k = 1; k <= i; ++k) acc += s[k] * a[i - k];
            if (acc % i != 0) throw Error("l_polynomial: Newton identity is not integral");
            a[i] = -acc / i;
        }
        for (int i = 0; i < g; ++i) a[2 * g - i] = ipow(q(), static_cast<unsigned>(g - i)) * a[i];
        return a;
    }

    /// L(1), the order of Pic^0.
    Integer class_number() const {
        Integer h = 0;
        for (auto const& c : l_polynomial()) h += c;
        return h;
    }

    void require_geometric() const {
        if (constant_extension_) throw Unsupported("the cover is a constant field extension");
    }

private:
    explicit Curve(std::int64_t q) : K_(q) {}

    void init() {
        GF const& F = K_.F();
        ram_.clear();
        if (kind_ == CurveKind::ArtinSchreier) {
            if (poly::deg(Q_.den) > 0)
                for (auto const& [pl, m] : K_.factor(Q_.den).second) ram_.push_back({pl, n_, (n_ - 1) * (m + 1), m});
            int m = poly::deg(Q_.num) - poly::deg(Q_.den);
            if (!Q_.is_zero() && m > 0) ram_.push_back({Place::infinity(), n_, (n_ - 1) * (m + 1), m});
        } else if (poly::deg(Q_.num) > 0) {
            for (auto const& [pl, m] : K_.factor(Q_.num).second) ram_.push_back({pl, n_, n_ - 1, m});
            int d = poly::deg(Q_.num);
            if (d % n_) ram_.push_back({Place::infinity(), n_, n_ - 1, d});
        }
        std::sort(ram_.begin(), ram_.end(), [](auto const& a, auto const& b) { return a.place < b.place; });
        (void)F;
        if (constant_extension_) {
            genus_ = 0;
            return;
        }
        int twice = -2 * n_;
        for (auto const& r : ram_) twice += r.different * r.place.degree;
        if (twice % 2 != 0 || twice < -2) throw Error("Riemann-Hurwitz: inconsistent ramification");
        genus_ = twice / 2 + 1;
    }

    BaseField K_;
    CurveKind kind_ = CurveKind::ArtinSchreier;
    int n_ = 2;
    RatFunc input_;
    RatFunc Q_;
    Elem zeta_ = 1;
    bool constant_extension_ = false;
    std::vector<RamifiedPlace> ram_;
    int genus_ = 0;
};

}  // namespace capitula::fforacle
