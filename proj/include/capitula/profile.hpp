#pragma once

// Local data of a finite Galois extension K/F of global fields: the places of
// S ∪ R with their ramification indices and residue degrees, and the integers
// d_v, D, n0 derived from them.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "capitula/error.hpp"
#include "capitula/integer.hpp"

namespace capitula::profile {

enum class BaseKind { NumberField, FunctionField };

/// Shape of Gal(K/F). An abelian group with a single generator order counts as cyclic.
struct GroupShape {
    enum class Kind { Cyclic, Abelian, General };
    Kind kind = Kind::Cyclic;
    std::vector<std::int64_t> orders;  // generator orders when kind == Abelian

    static GroupShape cyclic() { return {Kind::Cyclic, {}}; }
    static GroupShape abelian(std::vector<std::int64_t> o) { return {Kind::Abelian, std::move(o)}; }
    static GroupShape general() { return {Kind::General, {}}; }

    bool is_cyclic() const { return kind == Kind::Cyclic || (kind == Kind::Abelian && orders.size() <= 1); }
};

struct PlaceProfile {
    std::string id;
    bool in_S = false;
    bool ramified = false;
    bool archimedean = false;
    std::int64_t e = 1;
    std::int64_t f = 1;
    std::int64_t local_degree = 1;  // [K_w : F_v]
    std::optional<std::int64_t> deg;
    std::optional<Integer> h2_local_order;  // [H^2(G_w, U_w)]

    /// A non-archimedean place with local degree e*f, ramified iff e > 1.
    static PlaceProfile make(std::string id, bool in_S, std::int64_t e, std::int64_t f,
                             std::optional<std::int64_t> deg = std::nullopt) {
        PlaceProfile p;
        p.id = std::move(id);
        p.in_S = in_S;
        p.e = e;
        p.f = f;
        p.local_degree = e * f;
        p.ramified = e > 1;
        p.deg = deg;
        return p;
    }
};

struct ExtensionProfile {
    BaseKind base = BaseKind::NumberField;
    std::optional<std::int64_t> q;  // constant field size of F (function fields)
    std::int64_t n = 1;
    GroupShape group;
    std::vector<PlaceProfile> places;  // exactly S' = S ∪ R
    std::optional<Integer> h_FS;
    std::optional<Integer> h_KS;
    std::optional<std::int64_t> q_prime;

    std::vector<PlaceProfile const*> s_places() const {
        std::vector<PlaceProfile const*> out;
        for (auto const& p : places)
            if (p.in_S) out.push_back(&p);
        return out;
    }
    /// R \ S
    std::vector<PlaceProfile const*> ramified_outside_s() const {
        std::vector<PlaceProfile const*> out;
        for (auto const& p : places)
            if (!p.in_S && p.ramified) out.push_back(&p);
        return out;
    }
    /// #S_K: the number of places of K above S.
    Integer places_of_K_above_s() const {
        Integer c = 0;
        for (auto const* p : s_places()) c += Integer(n) / p->local_degree;
        return c;
    }
};

/// d_v for every v ∈ S', keyed by place id.
inline std::map<std::string, Integer> compute_dv(ExtensionProfile const& p) {
    std::map<std::string, Integer> d;
    bool const cyclic = p.group.is_cyclic();
    for (auto const& v : p.places) {
        Integer dv;
        if (v.in_S) {
            dv = v.local_degree;
        } else if (v.ramified) {
            if (cyclic) {
                dv = v.e;
            } else {
                if (!v.h2_local_order)
                    throw IncompleteProfile("place " + v.id + " needs h2_local_order (non-cyclic group)");
                dv = *v.h2_local_order;
            }
        } else {
            continue;
        }
        if (cyclic && Integer(p.n) % dv != 0)
            throw ValidationError("d_v = " + to_string(dv) + " of place " + v.id + " does not divide n");
        d.emplace(v.id, dv);
    }
    return d;
}

inline std::vector<Integer> dv_values(ExtensionProfile const& p) {
    std::vector<Integer> out;
    for (auto const& [id, dv] : compute_dv(p)) out.push_back(dv);
    return out;
}

/// lcm of the d_v.
inline Integer compute_D(ExtensionProfile const& p) {
    auto d = dv_values(p);
    if (d.empty()) throw PreconditionError("S' is empty");
    return lcm_of(d);
}

/// (D, n0 = n / D).
inline std::pair<Integer, Integer> compute_D_n0(ExtensionProfile const& p) {
    Integer D = compute_D(p);
    if (Integer(p.n) % D != 0) throw ValidationError("D = " + to_string(D) + " does not divide n");
    return {D, Integer(p.n) / D};
}

inline bool pairwise_coprime(std::vector<Integer> const& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (gcd(xs[i], xs[j]) != 1) return false;
    return true;
}

struct Violation {
    std::string place;  // empty for profile-level rules
    std::string rule;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::map<std::string, Integer> d_prime;
    bool d_prime_pairwise_coprime = false;
    std::optional<bool> d_pairwise_coprime;  // absent when some d_v is not computable

    bool ok() const { return violations.empty(); }
};

/// Checks every consistency rule; never throws.
inline ValidationReport validate(ExtensionProfile const& p) {
    ValidationReport rep;
    auto flag = [&](std::string place, std::string rule, std::string msg) {
        rep.violations.push_back({std::move(place), std::move(rule), std::move(msg)});
    };

    if (p.n < 1) flag("", "degree", "n must be positive");
    if (p.base == BaseKind::FunctionField) {
        if (!p.q || prime_power(*p.q).first == 0) flag("", "constant-field", "q must be a prime power");
        if (p.q_prime) {
            std::int64_t qq = *p.q_prime;
            bool power = p.q && *p.q >= 2;
            if (power) {
                while (qq > 1 && qq % *p.q == 0) qq /= *p.q;
                power = qq == 1;
            }
            if (!power) flag("", "constant-field", "q' must be a power of q");
        }
    } else if (p.q || p.q_prime) {
        flag("", "constant-field", "q and q' apply to function fields only");
    }
    if (p.group.kind == GroupShape::Kind::Abelian) {
        std::int64_t prod = 1;
        for (auto o : p.group.orders) prod *= o;
        if (prod != p.n) flag("", "group", "generator orders must multiply to n");
    }
    if (p.h_FS && *p.h_FS < 1) flag("", "class-number", "h_FS must be positive");
    if (p.h_KS && *p.h_KS < 1) flag("", "class-number", "h_KS must be positive");

    bool any_s = false;
    std::set<std::string> ids;
    bool const cyclic = p.group.is_cyclic();
    for (auto const& v : p.places) {
        any_s |= v.in_S;
        if (!ids.insert(v.id).second) flag(v.id, "unique-id", "duplicate place id");
        if (v.e < 1 || v.f < 1) {
            flag(v.id, "positive", "e and f must be positive");
            continue;
        }
        if (v.local_degree != v.e * v.f) flag(v.id, "local-degree", "local degree must equal e*f");
        if (p.n >= 1 && p.n % v.local_degree != 0) flag(v.id, "local-degree", "local degree must divide n");
        if (v.archimedean) {
            if (p.base != BaseKind::NumberField) flag(v.id, "archimedean", "function fields have no archimedean places");
            if (v.f != 1 || v.local_degree > 2) flag(v.id, "archimedean", "archimedean places need f = 1 and local degree 1 or 2");
            if (v.ramified) flag(v.id, "archimedean", "archimedean places are never in R");
        } else if (v.ramified != (v.e > 1)) {
            flag(v.id, "ramified", "ramified must hold exactly when e > 1");
        }
        if (!v.in_S && !v.ramified) flag(v.id, "support", "place is neither in S nor ramified");
        if (p.base == BaseKind::FunctionField && !v.archimedean && (!v.deg || *v.deg < 1))
            flag(v.id, "degree", "function-field places need deg >= 1");
        if (p.base == BaseKind::NumberField && v.deg) flag(v.id, "degree", "deg applies to function fields only");
        if (v.h2_local_order) {
            Integer const h = *v.h2_local_order;
            Integer const g = gcd(Integer(v.e), Integer(v.f));
            if (h < 1 || h % g != 0 || Integer(v.e) % (h / g) != 0) {
                flag(v.id, "local-h2",
                     "[H^2(G_w,U_w)] = " + to_string(h) + " must be gcd(e,f) times a divisor of e (so it divides e^2)");
            }
            if (cyclic && h != v.e) flag(v.id, "local-h2-cyclic", "for cyclic groups [H^2(G_w,U_w)] must equal e");
        }
    }
    if (!any_s) flag("", "nonempty-S", "S must be nonempty");

    std::vector<Integer> dp;
    for (auto const& v : p.places) {
        if (v.in_S) rep.d_prime[v.id] = v.local_degree;
        else if (v.ramified) rep.d_prime[v.id] = v.e;
    }
    for (auto const& [id, x] : rep.d_prime) dp.push_back(x);
    rep.d_prime_pairwise_coprime = pairwise_coprime(dp);

    try {
        auto d = dv_values(p);
        rep.d_pairwise_coprime = pairwise_coprime(d);
    } catch (IncompleteProfile const&) {
    } catch (ValidationError const& e) {
        flag("", "d-divides-n", e.what());
    }
    return rep;
}

}  // namespace capitula::profile
