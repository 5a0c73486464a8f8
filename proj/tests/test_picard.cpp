#include <gtest/gtest.h>

#include <functional>
#include <optional>

#include "capitula/fforacle/picard.hpp"

using namespace capitula;
using namespace capitula::fforacle;
using abelian::AbHom;
using abelian::FinAbGroup;

namespace {

RatFunc rf(BaseField const& K, std::vector<long long> num, std::vector<long long> den = {1}) {
    return RatFunc::make(K.F(), poly::from_ints(K.F(), num), poly::from_ints(K.F(), den));
}

Curve as(std::int64_t q, std::vector<long long> num, std::vector<long long> den = {1}) {
    return Curve::artin_schreier(q, rf(BaseField(q), num, den));
}

Curve kummer(std::int64_t q, int l, std::vector<long long> num, std::vector<long long> den = {1}) {
    return Curve::kummer(q, l, rf(BaseField(q), num, den));
}

FinAbGroup G(std::vector<long long> f) {
    std::vector<Integer> v(f.begin(), f.end());
    return FinAbGroup::from_cyclic_orders(v);
}

// E: y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over GF(q), with the chord-tangent law.
struct Weierstrass {
    GF const& F;
    Elem a1, a2, a3, a4, a6;
    using Pt = std::optional<std::pair<Elem, Elem>>;  // nullopt = O

    Elem k(long long c) const { return F.from_int(c); }
    std::vector<Pt> points() const {
        std::vector<Pt> out{std::nullopt};
        for (Elem x = 0; x < F.size(); ++x)
            for (Elem y = 0; y < F.size(); ++y) {
                Elem l = F.add(F.mul(y, y), F.add(F.mul(a1, F.mul(x, y)), F.mul(a3, y)));
                Elem r = F.add(F.pow(x, 3), F.add(F.mul(a2, F.mul(x, x)), F.add(F.mul(a4, x), a6)));
                if (l == r) out.push_back(std::make_pair(x, y));
            }
        return out;
    }
    Pt neg(Pt const& P) const {
        if (!P) return P;
        auto [x, y] = *P;
        return std::make_pair(x, F.sub(F.neg(y), F.add(F.mul(a1, x), a3)));
    }
    Pt add(Pt const& P, Pt const& Q) const {
        if (!P) return Q;
        if (!Q) return P;
        auto [x1, y1] = *P;
        auto [x2, y2] = *Q;
        if (x1 == x2 && F.add(F.add(y1, y2), F.add(F.mul(a1, x2), a3)) == 0) return std::nullopt;
        Elem lam, nu;
        if (x1 != x2) {
            Elem dx = F.inv(F.sub(x2, x1));
            lam = F.mul(F.sub(y2, y1), dx);
            nu = F.mul(F.sub(F.mul(y1, x2), F.mul(y2, x1)), dx);
        } else {
            Elem den = F.inv(F.add(F.add(F.mul(k(2), y1), F.mul(a1, x1)), a3));
            Elem x1s = F.mul(x1, x1);
            lam = F.mul(F.sub(F.add(F.add(F.mul(k(3), x1s), F.mul(F.mul(k(2), a2), x1)), a4), F.mul(a1, y1)), den);
            nu = F.mul(F.sub(F.add(F.add(F.neg(F.mul(x1s, x1)), F.mul(a4, x1)), F.mul(k(2), a6)), F.mul(a3, y1)), den);
        }
        Elem x3 = F.sub(F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(a1, lam)), a2), x1), x2);
        Elem y3 = F.sub(F.sub(F.neg(F.mul(F.add(lam, a1), x3)), nu), a3);
        return std::make_pair(x3, y3);
    }
    Pt mul(long long n, Pt P) const {
        Pt R;
        for (long long i = 0; i < n; ++i) R = add(R, P);
        return R;
    }
};

// Structure of a finite abelian group from the counts #G[m] of m-torsion elements.
FinAbGroup structure(std::size_t order, std::function<long long(long long)> torsion) {
    std::vector<Integer> cyclic;
    long long N = static_cast<long long>(order);
    for (long long p = 2; p <= N; ++p) {
        bool prime = true;
        for (long long d = 2; d * d <= p; ++d) prime = prime && p % d;
        if (!prime || N % p) continue;
        std::vector<int> ranks;
        long long prev = 1, pk = 1;
        while (N % (pk * p) == 0) {
            pk *= p;
            long long c = torsion(pk);
            int r = 0;
            for (long long x = c / prev; x > 1; x /= p) ++r;
            ranks.push_back(r);
            prev = c;
        }
        for (std::size_t j = 0; j < ranks.size(); ++j) {
            int here = ranks[j] - (j + 1 < ranks.size() ? ranks[j + 1] : 0);
            Integer o = 1;
            for (std::size_t t = 0; t <= j; ++t) o *= p;
            for (int t = 0; t < here; ++t) cyclic.push_back(o);
        }
    }
    return FinAbGroup::from_cyclic_orders(cyclic);
}

struct ECTruth {
    FinAbGroup group, fixed;
};

// E(F_q) and the subgroup fixed by an automorphism alpha (alpha(O) = O).
ECTruth ec_truth(Weierstrass const& E, std::function<Weierstrass::Pt(Weierstrass::Pt const&)> alpha) {
    auto pts = E.points();
    auto tors = [&](std::vector<Weierstrass::Pt> const& set) {
        return [&, set](long long m) {
            long long c = 0;
            for (auto const& P : set) c += !E.mul(m, P);
            return c;
        };
    };
    std::vector<Weierstrass::Pt> fixed;
    for (auto const& P : pts)
        if (alpha(P) == P) fixed.push_back(P);
    return {structure(pts.size(), tors(pts)), structure(fixed.size(), tors(fixed))};
}

void check_invariants(PicardData const& pd) {
    auto const& c = *pd.curve;
    EXPECT_EQ(pd.group.order(), pd.h) << c.description();
    EXPECT_EQ(pd.h, c.class_number());
    // sigma^n = id
    auto s = AbHom::identity(pd.group);
    for (int i = 0; i < c.n(); ++i) s = pd.sigma_action.after(s);
    EXPECT_EQ(s, AbHom::identity(pd.group));
    // degree is invariant, sigma permutes places above one base place
    for (std::size_t i = 0; i < pd.places.size(); ++i) {
        EXPECT_EQ(pd.degree_map[pd.sigma_perm[i]], pd.degree_map[i]);
        EXPECT_EQ(pd.places[pd.sigma_perm[i]].base, pd.places[i].base);
    }
    // conorm of a base place has degree n * deg
    for (std::size_t b = 0; b < pd.base_places.size(); ++b)
        EXPECT_EQ(pd.degree(pd.conorm(b)), Integer(c.n()) * pd.base_places[b].degree);
}

}  // namespace

TEST(Picard, SmallCurvesTable) {
    struct Row {
        Curve c;
        FinAbGroup pic, inv;
        long long dprime;
    };
    std::vector<Row> rows{
        {as(2, {0, 0, 0, 1}), G({3}), G({}), 1},
        {as(2, {1, 0, 0, 0, 1}, {0, 1}), G({8}), G({2}), 1},
        {as(2, {1, 0, 0, 0, 1, 1}, {0, 1, 1}), G({2, 6}), G({2, 2}), 1},
        {as(3, {0, 0, 1}), G({2, 2}), G({}), 1},
        {kummer(3, 2, {0, 1}), G({}), G({}), 1},
        {kummer(3, 2, {0, 2, 0, 1}), G({2, 2}), G({2, 2}), 1},
        {as(4, {0, 0, 0, 1}), G({3, 3}), G({}), 1},
        {kummer(4, 3, {0, 1, 1}), G({3, 3}), G({3}), 1},
        {as(3, {1, 0, 1}, {0, 1}), G({3, 3}), G({3}), 1},
        {kummer(3, 2, {0, 2, 0, 0, 0, 1}), G({2, 2, 2}), G({2, 2, 2}), 1},
        {kummer(3, 2, {1, 0, 0, 0, 1}), G({2, 2}), G({4}), 2},
    };
    for (auto const& r : rows) {
        auto pd = picard_group(r.c);
        SCOPED_TRACE(r.c.description());
        EXPECT_EQ(pd.group, r.pic);
        EXPECT_EQ(galois_invariants(pd).order(), r.inv.order());
        EXPECT_EQ(delta_prime(pd), r.dprime);
        check_invariants(pd);
    }
}

TEST(Picard, EllipticCurvesAgainstGroupLaw) {
    // y^2 + y = x^3 over F_2 and F_4; sigma: y -> y + 1 is negation
    for (std::int64_t q : {2, 4}) {
        auto c = as(q, {0, 0, 0, 1});
        GF const& F = c.base().F();
        Weierstrass E{F, 0, 0, 1, 0, 0};
        auto t = ec_truth(E, [&](auto const& P) { return E.neg(P); });
        auto pd = picard_group(c);
        EXPECT_EQ(pd.group, t.group) << q;
        EXPECT_EQ(galois_invariants(pd), t.fixed) << q;
    }
    // y^2 = x^3 - x over F_3; sigma: y -> -y
    {
        auto c = kummer(3, 2, {0, 2, 0, 1});
        GF const& F = c.base().F();
        Weierstrass E{F, 0, 0, 0, F.from_int(-1), 0};
        auto t = ec_truth(E, [&](auto const& P) { return E.neg(P); });
        auto pd = picard_group(c);
        EXPECT_EQ(pd.group, t.group);
        EXPECT_EQ(galois_invariants(pd), t.fixed);
    }
    // y^3 - y = t^2 over F_3 is Y^2 = X^3 - X with X = y, Y = t; sigma: X -> X + 1
    {
        auto c = as(3, {0, 0, 1});
        GF const& F = c.base().F();
        Weierstrass E{F, 0, 0, 0, F.from_int(-1), 0};
        auto t = ec_truth(E, [&](Weierstrass::Pt const& P) -> Weierstrass::Pt {
            if (!P) return P;
            return std::make_pair(F.add(P->first, 1), P->second);
        });
        auto pd = picard_group(c);
        EXPECT_EQ(pd.group, t.group);
        EXPECT_EQ(galois_invariants(pd), t.fixed);
    }
    // y^2 = x^3 + 2x + 1 over F_5 (Kummer, l = 2 | 4)
    {
        auto c = kummer(5, 2, {1, 2, 0, 1});
        GF const& F = c.base().F();
        Weierstrass E{F, 0, 0, 0, 2, 1};
        auto t = ec_truth(E, [&](auto const& P) { return E.neg(P); });
        auto pd = picard_group(c);
        EXPECT_EQ(pd.group, t.group);
        EXPECT_EQ(galois_invariants(pd), t.fixed);
    }
}

TEST(Picard, ClassOfPrincipalDivisorIsZero) {
    // div(t) on y^2 = t^3 - t: 2 (0) - 2 (inf) is principal, and so is the conorm of any place minus deg * conorm(inf)
    auto pd = picard_group(kummer(3, 2, {0, 2, 0, 1}));
    auto inf = pd.base_index(Place::infinity()).value();
    for (std::size_t b = 0; b < pd.base_places.size(); ++b) {
        Divisor d = pd.conorm(b);
        Divisor e = pd.conorm(inf);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= Integer(pd.base_places[b].degree) * e[i];
        auto c = pd.class_of(d);
        for (auto const& x : c) EXPECT_EQ(x, 0) << pd.base_places[b].name();
    }
}

TEST(SClassGroup, Examples) {
    // imaginary curve, S = {inf}: equals Pic^0
    {
        auto pd = picard_group(as(2, {1, 0, 0, 0, 1}, {0, 1}));
        auto s = s_class_group(pd, places_above(pd, {Place::infinity()}));
        EXPECT_EQ(s.group, pd.group);
    }
    // genus 0, S = every degree-one place: trivial
    {
        auto c = kummer(3, 2, {0, 1});
        auto pd = picard_group(c);
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < pd.places.size(); ++i)
            if (pd.degree_map[i] == 1) all.push_back(i);
        EXPECT_TRUE(s_class_group(pd, all).group.is_trivial());
    }
    // genus 1, S = {inf, a split place P}: order h / ord[P - inf]
    {
        auto c = as(2, {0, 0, 0, 1});
        BaseField const& K = c.base();
        Place t0 = K.place_of(poly::from_ints(K.F(), {0, 1}));
        auto pd = picard_group(c, {}, {t0});
        auto inf = pd.places_above(pd.base_index(Place::infinity()).value());
        auto above = pd.places_above(pd.base_index(t0).value());
        ASSERT_EQ(above.size(), 2u);
        Divisor d = pd.place_divisor(above[0]);
        d[inf[0]] -= 1;
        Integer ord = element_order(pd.group, pd.class_of(d));
        std::vector<std::size_t> S{inf[0], above[0]};
        EXPECT_EQ(s_class_group(pd, S).group.order(), pd.h / ord);
        EXPECT_EQ(pd.h / ord, 1);  // h = 3 and the class is nonzero
    }
    EXPECT_THROW(s_class_group(picard_group(kummer(3, 2, {0, 1})), {}), PreconditionError);
}

TEST(DeltaPrime, DividesDeltaDividesN) {
    for (auto const& c : {as(2, {1, 0, 0, 0, 1}, {0, 1}), kummer(3, 2, {1, 0, 0, 0, 1}), kummer(4, 3, {0, 1, 1}),
                          kummer(3, 2, {1, 0, 1})}) {
        auto pd = picard_group(c);
        Integer dp = delta_prime(pd);
        EXPECT_EQ(Integer(c.n()) % dp, 0);
        // delta = gcd of degrees of invariant divisors: gcd of n * deg over inert/ramified and deg over ramified
        Integer delta = c.n();
        for (auto const& r : c.ramification()) delta = gcd(delta, Integer(r.place.degree));
        EXPECT_EQ(delta % dp, 0) << c.description();
    }
}

TEST(Picard, Options) {
    PicardOptions o;
    o.max_candidates = 1;
    EXPECT_THROW(picard_group(as(2, {1, 0, 0, 0, 1, 1}, {0, 1, 1}), o), ResourceError);
    EXPECT_THROW(picard_group(kummer(3, 2, {2})), Error);
}
