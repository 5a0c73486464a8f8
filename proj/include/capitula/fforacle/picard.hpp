#pragma once

// Divisor class groups of the covers in curve.hpp, with the Galois action.
//
// Generators: the places of K above the places of F_q(t) of degree <= B
// (B >= g, so every degree-zero class is supported there), plus all ramified
// places and any places of S. Relations: divisors of functions a_0 + a_1 y
// (+ a_2 y^2 ...) whose norm to F_q(t) factors over the generator places. The
// valuations at split places come from power-series expansions of y. The
// relation lattice is kept in echelon form modulo h = L(1) and is complete once
// its index in the degree-zero lattice equals h.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "capitula/abelian.hpp"
#include "capitula/error.hpp"
#include "capitula/fforacle/curve.hpp"
#include "capitula/fforacle/gf.hpp"
#include "capitula/fforacle/poly.hpp"
#include "capitula/integer.hpp"
#include "capitula/matrix.hpp"

namespace capitula::fforacle {

using abelian::AbHom;
using abelian::FinAbGroup;

struct PicardOptions {
    int degree_bound = 0;            // 0: max(g, 1)
    int max_degree_bound = 0;        // 0: degree_bound + 2
    int max_function_degree = 12;    // coefficients a_i of relation functions
    std::uint64_t max_candidates = 4'000'000;
};

/// A place of K: above base place `base`, with residue degree `degree` over F_q.
/// For split places `eta` is the value of y (of y u^(deg f / l) at infinity) at the chosen root.
struct KPlace {
    std::size_t base = 0;
    SplitType type = SplitType::Split;
    int degree = 1;
    Elem eta = 0;
};

/// Integer coefficient per place of K, indexed like PicardData::places.
using Divisor = std::vector<Integer>;

namespace detail {

using Ser = std::vector<Elem>;

inline Ser ser_trunc(Ser a, std::size_t P) {
    a.resize(P, 0);
    return a;
}
inline Ser ser_add(GF const& L, Ser const& a, Ser const& b) {
    Ser r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = L.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    return r;
}
inline Ser ser_sub(GF const& L, Ser const& a, Ser const& b) {
    Ser nb = b;
    for (auto& x : nb) x = L.neg(x);
    return ser_add(L, a, nb);
}
inline Ser ser_mul(GF const& L, Ser const& a, Ser const& b, std::size_t P) {
    Ser r(P, 0);
    for (std::size_t i = 0; i < a.size() && i < P; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size() && i + j < P; ++j) r[i + j] = L.add(r[i + j], L.mul(a[i], b[j]));
    }
    return r;
}
inline Ser ser_inv(GF const& L, Ser const& a, std::size_t P) {
    if (a.empty() || a[0] == 0) throw Error("series inverse: zero constant term");
    Ser b(P, 0);
    Elem const i0 = L.inv(a[0]);
    b[0] = i0;
    for (std::size_t k = 1; k < P; ++k) {
        Elem s = 0;
        for (std::size_t j = 1; j <= k && j < a.size(); ++j) s = L.add(s, L.mul(a[j], b[k - j]));
        b[k] = L.neg(L.mul(i0, s));
    }
    return b;
}
inline Ser ser_pow(GF const& L, Ser const& a, int e, std::size_t P) {
    Ser r(P, 0);
    r[0] = 1;
    for (int i = 0; i < e; ++i) r = ser_mul(L, r, a, P);
    return r;
}
/// a(theta + s) truncated to P terms.
inline Ser taylor(GF const& L, Poly const& a, Elem theta, std::size_t P) {
    Ser acc(P, 0);
    Ser lin{theta, 1};
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        acc = ser_mul(L, acc, lin, P);
        acc[0] = L.add(acc[0], *it);
    }
    return acc;
}
inline Ser from_poly(Poly const& a, std::size_t P) {
    Ser r(P, 0);
    for (std::size_t i = 0; i < a.size() && i < P; ++i) r[i] = a[i];
    return r;
}
inline Ser shifted(Ser const& a, std::size_t k, std::size_t P) {
    Ser r(P, 0);
    for (std::size_t i = 0; i + k < P && i < a.size(); ++i) r[i + k] = a[i];
    return r;
}

/// Echelon basis of a sublattice of (Z/h)^n with Howell closure; index() is exact.
class ModLattice {
public:
    ModLattice(std::int64_t h, std::size_t n) : h_(h), rows_(n) {}

    /// Adds v; returns true if the lattice grew.
    bool insert(std::vector<std::int64_t> v) {
        Integer before = index();
        std::vector<std::vector<std::int64_t>> queue{std::move(v)};
        while (!queue.empty()) {
            auto w = std::move(queue.back());
            queue.pop_back();
            reduce_into(std::move(w), queue);
        }
        return index() != before;
    }

    /// [Z^n : L + h Z^n]
    Integer index() const {
        Integer r = 1;
        for (auto const& row : rows_) r *= row ? Integer(std::gcd(row->at(pivot_of(*row)), h_)) : Integer(h_);
        return r;
    }

    std::vector<std::vector<std::int64_t>> rows() const {
        std::vector<std::vector<std::int64_t>> out;
        for (auto const& r : rows_)
            if (r) out.push_back(*r);
        return out;
    }

private:
    static std::size_t pivot_of(std::vector<std::int64_t> const& r) {
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i]) return i;
        return r.size();
    }
    std::int64_t md(__int128 x) const {
        x %= h_;
        if (x < 0) x += h_;
        return static_cast<std::int64_t>(x);
    }
    void closure(std::vector<std::int64_t> const& r, std::size_t c, std::vector<std::vector<std::int64_t>>& queue) {
        std::int64_t g = std::gcd(r[c], h_);
        std::int64_t k = h_ / g;
        if (k == 1) return;
        std::vector<std::int64_t> w(r.size());
        bool nz = false;
        for (std::size_t i = 0; i < r.size(); ++i) {
            w[i] = md(static_cast<__int128>(r[i]) * k);
            nz |= w[i] != 0;
        }
        if (nz) queue.push_back(std::move(w));
    }
    void reduce_into(std::vector<std::int64_t> v, std::vector<std::vector<std::int64_t>>& queue) {
        for (auto& x : v) x = md(x);
        for (std::size_t c = 0; c < v.size(); ++c) {
            if (!v[c]) continue;
            if (!rows_[c]) {
                rows_[c] = v;
                closure(v, c, queue);
                return;
            }
            auto& r = *rows_[c];
            std::int64_t a = r[c], b = v[c];
            // (g, x, y) with x a + y b = g
            std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1, aa = a, bb = b;
            while (bb) {
                std::int64_t q = aa / bb, t = aa - q * bb;
                aa = bb;
                bb = t;
                t = x0 - q * x1;
                x0 = x1;
                x1 = t;
                t = y0 - q * y1;
                y0 = y1;
                y1 = t;
            }
            std::int64_t g = aa;
            std::vector<std::int64_t> nr(v.size()), nv(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                nr[i] = md(static_cast<__int128>(x0) * r[i] + static_cast<__int128>(y0) * v[i]);
                nv[i] = md(static_cast<__int128>(b / g) * r[i] - static_cast<__int128>(a / g) * v[i]);
            }
            bool changed = std::gcd(nr[c], h_) != std::gcd(r[c], h_);
            r = std::move(nr);
            if (changed) closure(r, c, queue);
            v = std::move(nv);
        }
    }

    std::int64_t h_;
    std::vector<std::optional<std::vector<std::int64_t>>> rows_;
};

}  // namespace detail

/// Pic^0(K) with the Galois action; see the header comment for the construction.
struct PicardData {
    std::shared_ptr<Curve const> curve;
    std::vector<Place> base_places;
    std::vector<KPlace> places;
    std::size_t p0 = 0;  // a degree-one place of K
    FinAbGroup group;
    Matrix projection;  // degree-zero coordinates -> group
    Matrix section;     // group generators -> degree-zero coordinates
    std::vector<std::size_t> sigma_perm;
    AbHom sigma_action;
    std::vector<int> degree_map;
    Integer h;
    std::vector<Integer> L_poly;
    int degree_bound = 0;
    std::size_t relations = 0;
    std::uint64_t candidates_tried = 0;

    std::size_t rank_coords() const { return places.size() - 1; }

    std::string place_name(std::size_t i) const {
        auto const& kp = places[i];
        std::string s = base_places[kp.base].name();
        if (kp.type == SplitType::Split) s += "[y=" + std::to_string(kp.eta) + "]";
        return s;
    }

    std::optional<std::size_t> base_index(Place const& pl) const {
        for (std::size_t i = 0; i < base_places.size(); ++i)
            if (base_places[i] == pl) return i;
        return std::nullopt;
    }
    std::vector<std::size_t> places_above(std::size_t base) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < places.size(); ++i)
            if (places[i].base == base) out.push_back(i);
        return out;
    }

    Divisor zero_divisor() const { return Divisor(places.size(), 0); }
    Divisor place_divisor(std::size_t i) const {
        Divisor d = zero_divisor();
        d[i] = 1;
        return d;
    }
    /// Sum of e * P over the places P above a base place.
    Divisor conorm(std::size_t base) const {
        Divisor d = zero_divisor();
        for (auto i : places_above(base)) d[i] = places[i].type == SplitType::Ramified ? curve->n() : 1;
        return d;
    }
    Integer degree(Divisor const& d) const {
        Integer s = 0;
        for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * degree_map[i];
        return s;
    }
    Divisor apply_sigma(Divisor const& d) const {
        Divisor r = zero_divisor();
        for (std::size_t i = 0; i < d.size(); ++i) r[sigma_perm[i]] += d[i];
        return r;
    }

    /// Degree-zero coordinates: drop the coefficient of P0.
    std::vector<Integer> coords(Divisor const& d) const {
        if (degree(d) != 0) throw PreconditionError("coords: divisor must have degree zero");
        std::vector<Integer> c;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (i != p0) c.push_back(d[i]);
        return c;
    }
    /// Class of a degree-zero divisor in `group` coordinates.
    std::vector<Integer> class_of(Divisor const& d) const {
        auto y = projection * coords(d);
        for (std::size_t r = 0; r < y.size(); ++r) y[r] = mod(y[r], group.invariant_factors()[r]);
        return y;
    }
    /// d - deg(d) P0
    Divisor normalize(Divisor d) const {
        d[p0] -= degree(d);
        return d;
    }
    /// Divisor representatives of the group generators.
    std::vector<Divisor> generators() const {
        std::vector<Divisor> out;
        for (std::size_t g = 0; g < group.rank(); ++g) {
            Divisor d = zero_divisor();
            std::size_t k = 0;
            for (std::size_t i = 0; i < places.size(); ++i) {
                if (i == p0) continue;
                d[i] = section(k, g);
                ++k;
            }
            out.push_back(normalize(d));
        }
        return out;
    }
};

namespace detail {

class PicardBuilder {
public:
    PicardBuilder(std::shared_ptr<Curve const> curve, PicardOptions opt, std::vector<Place> extra)
        : C_(std::move(curve)), K_(C_->base()), opt_(opt), extra_(std::move(extra)) {}

    PicardData run() {
        C_->require_geometric();
        int const g = C_->genus();
        int B = opt_.degree_bound > 0 ? opt_.degree_bound : std::max(g, 1);
        if (B < g) B = g;
        int const Bmax = opt_.max_degree_bound > 0 ? std::max(opt_.max_degree_bound, B) : B + 2;
        auto L = C_->l_polynomial();
        Integer h = 0;
        for (auto const& a : L) h += a;
        if (h > (Integer(1) << 40)) throw ResourceError("class number too large for the Picard computation");
        for (; B <= Bmax; ++B) {
            auto pd = attempt(B, static_cast<std::int64_t>(h));
            if (pd) {
                pd->L_poly = L;
                return std::move(*pd);
            }
        }
        throw ResourceError("Picard computation did not certify |Pic^0| = L(1) within the configured caps");
    }

private:
    using Ser = detail::Ser;

    std::optional<PicardData> attempt(int B, std::int64_t h) {
        PicardData pd;
        pd.curve = C_;
        pd.h = h;
        pd.degree_bound = B;
        setup_places(pd, B);
        std::size_t const N = pd.places.size();

        ModLattice lat(h, N - 1);
        auto add_relation = [&](Divisor const& d) {
            std::vector<std::int64_t> v;
            for (std::size_t i = 0; i < N; ++i)
                if (i != pd.p0) v.push_back(to_i64(mod(d[i], Integer(h))));
            if (lat.insert(std::move(v))) ++pd.relations;
        };
        auto certified = [&]() { return lat.index() == h; };

        std::uint64_t tried = 0;
        bool done = certified();
        for (int w = 0; !done && w <= opt_.max_function_degree; ++w) {
            enumerate(w, [&](std::vector<Poly> const& a) {
                if (done) return false;
                if (++tried > opt_.max_candidates) return false;
                if (auto d = divisor_of(pd, a)) {
                    add_relation(*d);
                    if (certified()) done = true;
                }
                return !done;
            });
            if (tried > opt_.max_candidates) break;
            if (!done) done = snf_index(lat, h, N - 1) == h;
        }
        pd.candidates_tried = tried;
        if (!done) return std::nullopt;
        finish(pd, lat, h);
        return pd;
    }

    static Integer snf_index(ModLattice const& lat, std::int64_t h, std::size_t n) {
        auto rows = lat.rows();
        Matrix M(n, rows.size());
        for (std::size_t c = 0; c < rows.size(); ++c)
            for (std::size_t r = 0; r < n; ++r) M(r, c) = rows[c][r];
        return abelian::quotient_of(std::vector<Integer>(n, Integer(h)), M).group.order();
    }

    void setup_places(PicardData& pd, int B) {
        std::vector<Place> bases = K_.places_up_to(B);
        auto add = [&](Place const& pl) {
            if (std::find(bases.begin(), bases.end(), pl) == bases.end()) bases.push_back(pl);
        };
        for (auto const& r : C_->ramification()) add(r.place);
        for (auto const& pl : extra_) add(pl);
        std::sort(bases.begin(), bases.end());
        pd.base_places = bases;
        for (std::size_t b = 0; b < bases.size(); ++b) {
            auto const& pl = bases[b];
            SplitType t = C_->splitting(pl);
            if (t == SplitType::Split) {
                for (Elem eta : C_->fibre(pl)) pd.places.push_back({b, t, pl.degree, eta});
            } else {
                pd.places.push_back({b, t, t == SplitType::Inert ? pl.degree * C_->n() : pl.degree, 0});
            }
        }
        pd.degree_map.clear();
        for (auto const& kp : pd.places) pd.degree_map.push_back(kp.degree);
        bool found = false;
        for (std::size_t i = 0; i < pd.places.size() && !found; ++i)
            if (pd.places[i].degree == 1) {
                pd.p0 = i;
                found = true;
            }
        if (!found) throw Unsupported("the curve has no place of degree one");
        // Galois action on places.
        pd.sigma_perm.resize(pd.places.size());
        for (std::size_t i = 0; i < pd.places.size(); ++i) {
            auto const& kp = pd.places[i];
            if (kp.type != SplitType::Split) {
                pd.sigma_perm[i] = i;
                continue;
            }
            Elem img = C_->sigma(kp.eta, pd.base_places[kp.base].degree);
            bool ok = false;
            for (std::size_t j = 0; j < pd.places.size(); ++j)
                if (pd.places[j].base == kp.base && pd.places[j].eta == img) {
                    pd.sigma_perm[i] = j;
                    ok = true;
                }
            if (!ok) throw Error("Galois action: image place not found");
        }
        // Cached expansions of y are per place and precision.
        ycache_.clear();
    }

    // Calls f(a) for every candidate a_0 + a_1 y + ... of weight exactly w, where the weight is
    // the largest coefficient degree and the top y-coefficient is monic.
    template <class Fn>
    void enumerate(int w, Fn&& f) {
        GF const& F = K_.F();
        std::int64_t const q = K_.q();
        auto all_polys = [&](int maxdeg) {
            std::vector<Poly> out;
            std::int64_t count = 1;
            for (int i = 0; i <= maxdeg; ++i) count *= q;
            for (std::int64_t code = 0; code < count; ++code) {
                Poly p;
                std::int64_t x = code;
                for (int i = 0; i <= maxdeg; ++i) {
                    p.push_back(static_cast<Elem>(x % q));
                    x /= q;
                }
                poly::trim(p);
                out.push_back(std::move(p));
            }
            return out;
        };
        auto monic_polys = [&](int maxdeg) {
            std::vector<Poly> out;
            for (auto const& p : all_polys(maxdeg))
                if (!p.empty() && p.back() == 1) out.push_back(p);
            return out;
        };
        (void)F;
        if (w == 0) {
            for (auto const& pl : K_.places_up_to(1))
                if (!pl.infinite && !f(std::vector<Poly>{pl.poly})) return;
        }
        // y-degree 0: irreducibles of degree w (the divisors of the base places).
        if (w >= 1)
            for (auto const& pl : K_.places_of_degree(w))
                if (!f(std::vector<Poly>{pl.poly})) return;
        auto polys = all_polys(w);
        auto monics = monic_polys(w);
        for (int top = 1; top < C_->n(); ++top) {
            for (auto const& lead : monics) {
                // every lower coefficient ranges over polynomials of degree <= w
                std::size_t const slots = static_cast<std::size_t>(top);
                std::vector<std::size_t> idx(slots, 0);
                for (;;) {
                    std::vector<Poly> a(slots + 1);
                    int wmax = poly::deg(lead);
                    for (std::size_t s = 0; s < slots; ++s) {
                        a[s] = polys[idx[s]];
                        wmax = std::max(wmax, poly::deg(a[s]));
                    }
                    a[slots] = lead;
                    if (wmax == w && (!a[0].empty() || poly::deg(lead) == 0) && !f(a)) return;
                    std::size_t s = 0;
                    while (s < slots && ++idx[s] == polys.size()) idx[s++] = 0;
                    if (s == slots) break;
                }
            }
        }
    }

    /// N_{K/F}(sum a_i y^i) as a rational function of t.
    RatFunc norm(std::vector<Poly> const& a) const {
        GF const& F = K_.F();
        int const n = C_->n();
        Poly const& Qn = C_->equation().num;
        Poly const& Qd = C_->equation().den;
        bool const as = C_->kind() == CurveKind::ArtinSchreier;

        // element: coefficients c_0..c_{n-1} over a common denominator
        struct El {
            std::vector<Poly> c;
            Poly den;
        };
        auto reduce = [&](std::vector<Poly> c, Poly den) {
            for (int k = static_cast<int>(c.size()) - 1; k >= n; --k) {
                if (c[k].empty()) continue;
                Poly top = c[k];
                c[k].clear();
                if (as) {
                    // y^k = y^(k-n) (y + Qn/Qd)
                    if (poly::deg(Qd) > 0) {
                        for (auto& x : c) x = poly::mul(F, x, Qd);
                        den = poly::mul(F, den, Qd);
                        c[k - n + 1] = poly::add(F, c[k - n + 1], poly::mul(F, top, Qd));
                    } else {
                        c[k - n + 1] = poly::add(F, c[k - n + 1], top);
                    }
                    c[k - n] = poly::add(F, c[k - n], poly::mul(F, top, Qn));
                } else {
                    c[k - n] = poly::add(F, c[k - n], poly::mul(F, top, Qn));
                }
            }
            c.resize(static_cast<std::size_t>(n));
            return El{std::move(c), std::move(den)};
        };
        auto mul = [&](El const& x, El const& y) {
            std::vector<Poly> c(2 * static_cast<std::size_t>(n) - 1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!x.c[i].empty() && !y.c[j].empty())
                        c[i + j] = poly::add(F, c[i + j], poly::mul(F, x.c[i], y.c[j]));
            return reduce(std::move(c), poly::mul(F, x.den, y.den));
        };
        auto conjugate = [&](int j) {
            std::vector<Poly> c(static_cast<std::size_t>(n));
            if (as) {
                // sum a_i (y + j)^i
                Elem const s = F.from_int(j);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    // binomial expansion of (y + s)^i
                    std::vector<Elem> bin{1};
                    for (std::size_t r = 0; r < i; ++r) {
                        std::vector<Elem> nb(bin.size() + 1, 0);
                        for (std::size_t u = 0; u < bin.size(); ++u) {
                            nb[u + 1] = F.add(nb[u + 1], bin[u]);
                            nb[u] = F.add(nb[u], F.mul(bin[u], s));
                        }
                        bin = std::move(nb);
                    }
                    for (std::size_t u = 0; u < bin.size(); ++u)
                        c[u] = poly::add(F, c[u], poly::scale(F, a[i], bin[u]));
                }
            } else {
                Elem z = F.pow(C_->zeta(), static_cast<std::uint64_t>(j));
                Elem zi = 1;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    c[i] = poly::scale(F, a[i], zi);
                    zi = F.mul(zi, z);
                }
            }
            return El{std::move(c), Poly{1}};
        };
        El acc = conjugate(0);
        for (int j = 1; j < n; ++j) acc = mul(acc, conjugate(j));
        for (int k = 1; k < n; ++k)
            if (!acc.c[k].empty()) throw Error("norm: result is not in F_q(t)");
        return RatFunc::make(F, acc.c[0], acc.den);
    }

    /// div(sum a_i y^i), or nullopt if its norm does not factor over the generator places.
    std::optional<Divisor> divisor_of(PicardData const& pd, std::vector<Poly> const& a) {
        GF const& F = K_.F();
        RatFunc N = norm(a);
        if (N.is_zero()) return std::nullopt;
        std::map<std::size_t, int> vb;  // base place -> valuation of N
        Poly num = N.num, den = N.den;
        std::optional<std::size_t> inf;
        for (std::size_t b = 0; b < pd.base_places.size(); ++b) {
            auto const& pl = pd.base_places[b];
            if (pl.infinite) {
                inf = b;
                continue;
            }
            int v = 0;
            if (poly::deg(num) >= pl.degree) {
                int k = valuation(F, num, pl.poly);
                if (k) num = poly::divmod(F, num, poly::pow(F, pl.poly, static_cast<std::uint64_t>(k))).first;
                v += k;
            }
            if (poly::deg(den) >= pl.degree) {
                int k = valuation(F, den, pl.poly);
                if (k) den = poly::divmod(F, den, poly::pow(F, pl.poly, static_cast<std::uint64_t>(k))).first;
                v -= k;
            }
            if (v) vb[b] = v;
        }
        if (poly::deg(num) > 0 || poly::deg(den) > 0) return std::nullopt;
        int const vinf = poly::deg(N.den) - poly::deg(N.num);
        if (!inf) throw Error("divisor_of: infinity missing from generators");
        if (vinf) vb[*inf] = vinf;

        Divisor d = pd.zero_divisor();
        int const n = C_->n();
        std::vector<std::size_t> todo;
        for (auto const& [b, v] : vb) {
            auto above = pd.places_above(b);
            auto const& kp = pd.places[above[0]];
            if (kp.type == SplitType::Ramified) {
                d[above[0]] = v;
            } else if (kp.type == SplitType::Inert) {
                if (v % n) throw Error("divisor_of: inert valuation not divisible by n");
                d[above[0]] = v / n;
            } else if (b != *inf) {
                split_valuations(pd, b, above, a, v, 0, d);
            }
        }
        // Split places above infinity can carry cancelling zeros and poles.
        auto above_inf = pd.places_above(*inf);
        if (pd.places[above_inf[0]].type == SplitType::Split) split_valuations(pd, *inf, above_inf, a, vinf, 0, d);
        if (pd.degree(d) != 0) throw Error("divisor_of: principal divisor of nonzero degree");
        return d;
    }

    /// y expansion at a split place (y u^c at infinity for Kummer), P terms.
    Ser y_series(PicardData const& pd, std::size_t idx, std::size_t P) {
        auto key = std::make_pair(idx, P);
        if (auto it = ycache_.find(key); it != ycache_.end()) return it->second;
        auto const& kp = pd.places[idx];
        auto const& pl = pd.base_places[kp.base];
        int const d = pl.infinite ? 1 : pl.degree;
        auto Lp = K_.extension(d);
        GF const& L = *Lp;
        auto E = K_.embed(d);
        Poly num = poly::map(*E, C_->equation().num), den = poly::map(*E, C_->equation().den);
        Ser target;
        if (pl.infinite) {
            int dn = poly::deg(num), dd = poly::deg(den);
            if (C_->kind() == CurveKind::ArtinSchreier) {
                target = ser_mul(L, shifted(from_poly(poly::reverse(num, dn), P), static_cast<std::size_t>(dd - dn), P),
                                 ser_inv(L, from_poly(poly::reverse(den, dd), P), P), P);
            } else {
                target = from_poly(poly::reverse(num, dn), P);
            }
        } else {
            target = ser_mul(L, taylor(L, num, pl.root, P), ser_inv(L, taylor(L, den, pl.root, P), P), P);
        }
        Ser Y(P, 0);
        Y[0] = kp.eta;
        int const n = C_->n();
        if (C_->kind() == CurveKind::ArtinSchreier) {
            // y = y^p - Q; the error e becomes e^p
            for (std::size_t prec = 1; prec < P; prec *= static_cast<std::size_t>(n))
                Y = ser_sub(L, ser_pow(L, Y, n, P), target);
            Y = ser_sub(L, ser_pow(L, Y, n, P), target);
        } else {
            Elem const nn = L.from_int(n);
            for (std::size_t prec = 1; prec < 2 * P; prec *= 2) {
                Ser f = ser_sub(L, ser_pow(L, Y, n, P), target);
                Ser df = ser_pow(L, Y, n - 1, P);
                for (auto& x : df) x = L.mul(x, nn);
                Y = ser_sub(L, Y, ser_mul(L, f, ser_inv(L, df, P), P));
            }
        }
        Y = ser_trunc(Y, P);
        ycache_[key] = Y;
        return Y;
    }

    void split_valuations(PicardData const& pd, std::size_t b, std::vector<std::size_t> const& above,
                          std::vector<Poly> const& a, int vnorm, int, Divisor& d) {
        auto const& pl = pd.base_places[b];
        int const n = C_->n();
        int const dgr = pl.infinite ? 1 : pl.degree;
        auto Lp = K_.extension(dgr);
        GF const& L = *Lp;
        auto E = K_.embed(dgr);
        int shift = 0;
        int c = 0;
        if (pl.infinite) {
            if (C_->kind() == CurveKind::Kummer) c = poly::deg(C_->equation().num) / n;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (!a[i].empty()) shift = std::max(shift, poly::deg(a[i]) + static_cast<int>(i) * c);
        }
        int const total = vnorm + n * shift;
        if (total < 0) throw Error("split_valuations: negative total valuation");
        std::size_t const P = static_cast<std::size_t>(total) + 1;
        int sum = 0;
        for (auto idx : above) {
            Ser Y = y_series(pd, idx, P);
            Ser G(P, 0), Yi(P, 0);
            Yi[0] = 1;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (!a[i].empty()) {
                    Poly ai = poly::map(*E, a[i]);
                    Ser A = pl.infinite ? shifted(from_poly(poly::reverse(ai, poly::deg(ai)), P),
                                                  static_cast<std::size_t>(shift - poly::deg(ai) - static_cast<int>(i) * c), P)
                                        : taylor(L, ai, pl.root, P);
                    G = ser_add(L, G, ser_mul(L, A, Yi, P));
                }
                Yi = ser_mul(L, Yi, Y, P);
            }
            std::size_t v = 0;
            while (v < P && G[v] == 0) ++v;
            if (v == P) throw Error("split_valuations: expansion vanished to full precision");
            int val = static_cast<int>(v) - shift;
            d[idx] = val;
            sum += static_cast<int>(v);
        }
        if (sum != total) throw Error("split_valuations: local valuations do not add up to the norm valuation");
    }

    void finish(PicardData& pd, ModLattice const& lat, std::int64_t h) {
        std::size_t const n = pd.places.size() - 1;
        auto rows = lat.rows();
        Matrix M(n, rows.size());
        for (std::size_t c = 0; c < rows.size(); ++c)
            for (std::size_t r = 0; r < n; ++r) M(r, c) = rows[c][r];
        auto q = abelian::quotient_of(std::vector<Integer>(n, Integer(h)), M);
        if (q.group.order() != h) throw Error("Picard: relation lattice index differs from L(1)");
        pd.group = q.group;
        pd.projection = q.projection;
        pd.section = q.section;

        // sigma on degree-zero coordinates: P_i - deg_i P0 -> P_s(i) - deg_i P_s(0)
        auto coord = [&](std::size_t i) -> std::optional<std::size_t> {
            if (i == pd.p0) return std::nullopt;
            return i < pd.p0 ? i : i - 1;
        };
        Matrix S(n, n);
        for (std::size_t i = 0; i < pd.places.size(); ++i) {
            auto ci = coord(i);
            if (!ci) continue;
            if (auto t = coord(pd.sigma_perm[i])) S(*t, *ci) += 1;
            if (auto t = coord(pd.sigma_perm[pd.p0])) S(*t, *ci) -= pd.degree_map[i];
        }
        pd.sigma_action = AbHom(pd.group, pd.group, pd.projection * S * pd.section);
        auto id = AbHom::identity(pd.group);
        AbHom pw = id;
        for (int i = 0; i < C_->n(); ++i) pw = pd.sigma_action.after(pw);
        if (!(pw == id)) throw Error("Picard: sigma^n is not the identity");
    }

    std::shared_ptr<Curve const> C_;
    BaseField const& K_;
    PicardOptions opt_;
    std::vector<Place> extra_;
    std::map<std::pair<std::size_t, std::size_t>, Ser> ycache_;
};

}  // namespace detail

/// Certified Pic^0 with Galois action. `extra_places` are base places (e.g. S) whose
/// places in K must be among the generators.
inline PicardData picard_group(Curve const& curve, PicardOptions const& opt = {},
                               std::vector<Place> const& extra_places = {}) {
    auto c = std::make_shared<Curve const>(curve);
    return detail::PicardBuilder(c, opt, extra_places).run();
}

/// ker(sigma - 1) on Pic^0.
inline FinAbGroup galois_invariants(PicardData const& pd) {
    return abelian::kernel(pd.sigma_action - AbHom::identity(pd.group)).group;
}

/// Class of sigma(P0) - P0 in Pic^0.
inline std::vector<Integer> sigma_p0_class(PicardData const& pd) {
    Divisor d = pd.zero_divisor();
    d[pd.sigma_perm[pd.p0]] += 1;
    d[pd.p0] -= 1;
    return pd.class_of(d);
}

inline Integer element_order(FinAbGroup const& g, std::vector<Integer> const& x) {
    Integer o = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Integer d = g.invariant_factors()[i];
        o = lcm(o, d / gcd(mod(x[i], d), d));
    }
    return o;
}

/// gcd of the degrees of G-invariant classes in Pic: the order of [sigma P0 - P0] in
/// the cokernel of sigma - 1 on Pic^0.
inline Integer delta_prime(PicardData const& pd) {
    auto b = sigma_p0_class(pd);
    auto cm = abelian::cokernel_map(pd.sigma_action - AbHom::identity(pd.group));
    return element_order(cm.target(), cm.apply(b));
}

/// Pic(K) / <places of S_K> with the induced Galois action.
struct SClassGroup {
    FinAbGroup group;
    AbHom sigma;
    abelian::Quotient quotient;  // from Pic^0 + Z/M (class of P0) to group
    Integer M;

    /// Class of an arbitrary divisor.
    std::vector<Integer> class_of(PicardData const& pd, Divisor const& d) const {
        auto c = pd.class_of(pd.normalize(d));
        c.push_back(mod(pd.degree(d), M));
        auto y = quotient.projection * c;
        for (std::size_t r = 0; r < y.size(); ++r) y[r] = mod(y[r], group.invariant_factors()[r]);
        return y;
    }
};

inline SClassGroup s_class_group(PicardData const& pd, std::vector<std::size_t> const& s_places) {
    if (s_places.empty()) throw PreconditionError("s_class_group: S_K must be nonempty");
    Integer d0 = 0;
    for (auto i : s_places) d0 = gcd(d0, Integer(pd.degree_map.at(i)));
    Integer const M = pd.group.exponent() * d0;
    std::vector<Integer> orders = pd.group.invariant_factors();
    orders.push_back(M);
    std::size_t const r = pd.group.rank();
    Matrix gens(r + 1, s_places.size());
    for (std::size_t j = 0; j < s_places.size(); ++j) {
        auto c = pd.class_of(pd.normalize(pd.place_divisor(s_places[j])));
        for (std::size_t i = 0; i < r; ++i) gens(i, j) = c[i];
        gens(r, j) = pd.degree_map[s_places[j]];
    }
    auto q = abelian::quotient_of(orders, gens);
    // sigma(c, k) = (sigma c + k b, k), b = [sigma P0 - P0]
    Matrix S(r + 1, r + 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) S(i, j) = pd.sigma_action.matrix()(i, j);
    auto b = sigma_p0_class(pd);
    for (std::size_t i = 0; i < r; ++i) S(i, r) = b[i];
    S(r, r) = 1;
    AbHom sigma(q.group, q.group, q.projection * S * q.section);
    return {q.group, sigma, q, M};
}

/// The places of K above the given base places.
inline std::vector<std::size_t> places_above(PicardData const& pd, std::vector<Place> const& base) {
    std::vector<std::size_t> out;
    for (auto const& pl : base) {
        auto b = pd.base_index(pl);
        if (!b) throw PreconditionError("place " + pl.name() + " is not among the generators");
        for (auto i : pd.places_above(*b)) out.push_back(i);
    }
    return out;
}

}  // namespace capitula::fforacle
