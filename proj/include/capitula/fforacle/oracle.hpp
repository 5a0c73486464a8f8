#pragma once

// Capitulation data and the quantities the cross-checks compare, all read off a
// certified PicardData. The base is F_q(t), so C_{F,S} is cyclic of order the gcd of
// the degrees of S, generated by the class of any degree-one place.

#include <optional>
#include <string>
#include <vector>

#include "capitula/abelian.hpp"
#include "capitula/cohomology.hpp"
#include "capitula/error.hpp"
#include "capitula/fforacle/curve.hpp"
#include "capitula/fforacle/picard.hpp"
#include "capitula/formulas.hpp"
#include "capitula/integer.hpp"
#include "capitula/profile.hpp"

namespace capitula::fforacle {

/// Base places of S' = S ∪ R, sorted, with S first checked for duplicates.
inline std::vector<Place> s_prime(Curve const& c, std::vector<Place> const& S) {
    if (S.empty()) throw PreconditionError("S must be nonempty");
    std::vector<Place> out = S;
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw PreconditionError("S lists a place twice");
    for (auto const& r : c.ramification())
        if (std::find(out.begin(), out.end(), r.place) == out.end()) out.push_back(r.place);
    std::sort(out.begin(), out.end());
    return out;
}

inline Integer h_FS_of(std::vector<Place> const& S) {
    Integer g = 0;
    for (auto const& pl : S) g = gcd(g, Integer(pl.degree));
    return g;
}

struct Capitulation {
    Integer h_FS;               // |C_{F,S}|
    std::size_t s_k_count = 0;  // #S_K
    SClassGroup c_ks;           // C_{K,S} with G-action
    FinAbGroup c_ks_invariants; // C_{K,S}^G
    Integer image_j;            // |j(C_{F,S})|
    Integer ker_j;
    Integer transgressive;      // |(C_{K,S})^G_trans|
    Integer coker_jprime;       // |trans| / |im j|
};

/// j sends the class of a degree-one place of F to its conorm; the transgressive classes
/// are generated by j(C_{F,S}) and the primes above R \ S.
inline Capitulation capitulation(PicardData const& pd, std::vector<Place> const& S) {
    Capitulation out;
    out.h_FS = h_FS_of(S);
    auto sk = places_above(pd, S);
    out.s_k_count = sk.size();
    out.c_ks = s_class_group(pd, sk);
    out.c_ks_invariants = abelian::kernel(out.c_ks.sigma - AbHom::identity(out.c_ks.group)).group;

    auto inf = pd.base_index(Place::infinity());
    if (!inf) throw Error("capitulation: infinity missing");
    auto jP = out.c_ks.class_of(pd, pd.conorm(*inf));
    out.image_j = element_order(out.c_ks.group, jP);
    if (out.h_FS % out.image_j != 0) throw Error("capitulation: order of j(P) does not divide h_FS");
    out.ker_j = out.h_FS / out.image_j;

    std::vector<std::vector<Integer>> gens{jP};
    for (auto const& r : pd.curve->ramification()) {
        if (std::find(S.begin(), S.end(), r.place) != S.end()) continue;
        auto b = pd.base_index(r.place);
        for (auto i : pd.places_above(*b)) gens.push_back(out.c_ks.class_of(pd, pd.place_divisor(i)));
    }
    Matrix G = Matrix::from_columns(out.c_ks.group.rank(), gens);
    out.transgressive = abelian::subgroup_of(out.c_ks.group.invariant_factors(), G).group.order();
    out.coker_jprime = out.transgressive / out.image_j;
    return out;
}

/// The ExtensionProfile of K/F_q(t) over S' = S ∪ R.
inline profile::ExtensionProfile realize_profile(Curve const& c, std::vector<Place> const& S, Integer const& h_KS) {
    profile::ExtensionProfile p;
    p.base = profile::BaseKind::FunctionField;
    p.q = c.q();
    p.n = c.n();
    p.group = profile::GroupShape::cyclic();
    for (auto const& pl : s_prime(c, S)) {
        bool in_S = std::find(S.begin(), S.end(), pl) != S.end();
        p.places.push_back(profile::PlaceProfile::make(pl.name(), in_S, c.ramification_index(pl),
                                                       c.residue_degree(pl), pl.degree));
    }
    p.h_FS = h_FS_of(S);
    p.h_KS = h_KS;
    p.q_prime = c.q();
    return p;
}

inline std::vector<formulas::Ramification> ramification_list(Curve const& c) {
    std::vector<formulas::Ramification> out;
    for (auto const& r : c.ramification()) out.push_back({r.e, r.place.degree});
    return out;
}

/// Both sides of the ambiguous class number formula for J_K = Pic^0.
struct AmbiguousClassCheck {
    Integer lhs;  // [J_K^G]
    Integer rhs;  // from chevalley_ff
    Integer delta, delta_prime, m, h1_const, h2_const, h1_Kmod;
    std::vector<Integer> e_list;
    std::optional<std::string> error;  // chevalley_ff rejected its inputs
    bool holds() const { return !error && lhs == rhs; }
};

inline AmbiguousClassCheck ambiguous_class_check(PicardData const& pd) {
    Curve const& c = *pd.curve;
    AmbiguousClassCheck r;
    r.lhs = galois_invariants(pd).order();
    auto ram = ramification_list(c);
    r.delta = formulas::delta_index(c.n(), ram);
    r.delta_prime = delta_prime(pd);
    if (r.delta % r.delta_prime != 0 || Integer(c.n()) % r.delta != 0)
        throw Error("delta' | delta | n fails");
    // (k')^* = F_q^* with trivial action
    auto kstar = cohomology::GModule::trivial(cohomology::ActingGroup::cyclic(c.n()), FinAbGroup::cyclic(Integer(c.q() - 1)));
    r.h1_const = cohomology::h1_cyclic(kstar).order();
    r.h2_const = cohomology::h2_cyclic(kstar).order();
    r.m = ram.empty() ? Integer(c.q() - 1) : formulas::m_invariant(c.q(), ram);
    Integer num = r.h2_const * r.m;
    if (num % (c.q() - 1) != 0) throw Error("[H^2] m / (q-1) is not an integer");
    r.h1_Kmod = num / (c.q() - 1);
    for (auto const& x : ram) r.e_list.push_back(x.e);
    try {
        r.rhs = formulas::chevalley_ff(1, r.h1_Kmod, r.e_list, c.n(), static_cast<std::int64_t>(r.delta_prime), r.h1_const);
    } catch (Error const& ex) {
        r.error = ex.what();
    }
    return r;
}

/// Inputs of the two order relations when U_{K,S} = F_q^* (#S_K = 1).
struct OrderRelationInputs {
    Integer ker_j, h1_units, coker_jprime, h0_hat;
    std::vector<Integer> e_list;           // R \ S
    std::vector<Integer> local_degrees_S;
    std::int64_t n = 1;
};

inline OrderRelationInputs order_relation_inputs(Curve const& c, profile::ExtensionProfile const& p,
                                                 Capitulation const& cap) {
    if (cap.s_k_count != 1) throw HypothesisError("order relations need #S_K = 1");
    OrderRelationInputs in;
    auto units = cohomology::GModule::trivial(cohomology::ActingGroup::cyclic(c.n()), FinAbGroup::cyclic(Integer(c.q() - 1)));
    in.ker_j = cap.ker_j;
    in.h1_units = cohomology::h1_cyclic(units).order();
    in.h0_hat = cohomology::tate_h0(units).order();
    in.coker_jprime = cap.coker_jprime;
    for (auto const* v : p.ramified_outside_s()) in.e_list.push_back(v->e);
    for (auto const* v : p.s_places()) in.local_degrees_S.push_back(v->local_degree);
    in.n = c.n();
    return in;
}

}  // namespace capitula::fforacle
