#pragma once

// Order identities, divisibility bounds and structure statements for the
// S-class groups and S-unit cohomology of a Galois extension, evaluated on an
// ExtensionProfile. Hypotheses that cannot be read off the profile are passed
// in as caller-asserted flags.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "capitula/abelian.hpp"
#include "capitula/error.hpp"
#include "capitula/integer.hpp"
#include "capitula/profile.hpp"

namespace capitula::formulas {

using abelian::FinAbGroup;
using profile::ExtensionProfile;

enum class BoundKind { LowerBound, Divisor, Exact, Structure };

inline char const* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::LowerBound: return "lower_bound";
        case BoundKind::Divisor: return "divisor";
        case BoundKind::Exact: return "exact";
        case BoundKind::Structure: return "structure";
    }
    return "?";
}

struct Bound {
    Integer value;
    BoundKind kind;
};

/// A ramified prime of the rational base: ramification index and degree.
struct Ramification {
    std::int64_t e = 1;
    std::int64_t deg = 1;
};

namespace detail {

inline void require_cyclic(ExtensionProfile const& p, char const* what) {
    if (!p.group.is_cyclic()) throw HypothesisError(std::string(what) + " needs a cyclic Galois group");
}

/// (∏ d_v) / D
inline Integer b_order(ExtensionProfile const& p) {
    auto d = profile::dv_values(p);
    if (d.empty()) throw PreconditionError("S' is empty");
    return product_of(d) / lcm_of(d);
}

}  // namespace detail

/// n0 / gcd(n0, ∏d/D); divides the number of S-classes of F capitulating in K.
inline Integer hilbert94_lower_bound(ExtensionProfile const& p) {
    detail::require_cyclic(p, "hilbert94_lower_bound");
    auto [D, n0] = profile::compute_D_n0(p);
    Integer B = detail::b_order(p);
    return n0 / gcd(n0, B);
}

/// ker[⊕ Z/d_v -> Z/D].
inline FinAbGroup b_group(ExtensionProfile const& p) {
    auto d = profile::dv_values(p);
    if (d.empty()) throw PreconditionError("S' is empty");
    return abelian::sum_map_kernel(d, lcm_of(d));
}

struct SemisimpleReport {
    FinAbGroup h2_units;
    std::optional<Integer> ker_j_order;  // cyclic groups only
};

inline SemisimpleReport semisimple_report(ExtensionProfile const& p, Integer const& h_KS) {
    if (h_KS < 1) throw PreconditionError("h_KS must be positive");
    if (gcd(Integer(p.n), h_KS) != 1) throw HypothesisError("n is not prime to h_KS");
    SemisimpleReport r{b_group(p), std::nullopt};
    if (p.group.is_cyclic()) r.ker_j_order = profile::compute_D_n0(p).second;
    return r;
}

/// (∏d/D) / gcd(n0, ∏d/D); coker j has at least this many elements.
inline Integer coker_lower_bound(ExtensionProfile const& p, bool units_are_norms) {
    detail::require_cyclic(p, "coker_lower_bound");
    if (!units_are_norms) throw HypothesisError("coker_lower_bound needs every S-unit of F to be a norm from K");
    auto [D, n0] = profile::compute_D_n0(p);
    Integer B = detail::b_order(p);
    return B / gcd(n0, B);
}

/// t = Σ t_i − m.
inline Integer example53_t(Integer const& ell, Integer const& m, std::vector<Integer> const& t_list) {
    if (!is_prime(ell)) throw PreconditionError("ell must be prime");
    Integer s = 0;
    for (auto const& t : t_list) {
        if (t < 0) throw PreconditionError("t_i must be non-negative");
        s += t;
    }
    if (m >= s) throw HypothesisError("needs m < Σ t_i");
    return s - m;
}

struct NormIndexReport {
    Integer divisor_bound;
    bool all_units_norms;
};

inline NormIndexReport norm_index_report(ExtensionProfile const& p) {
    detail::require_cyclic(p, "norm_index_report");
    auto d = profile::dv_values(p);
    if (d.empty()) throw PreconditionError("S' is empty");
    return {product_of(d) / lcm_of(d), profile::pairwise_coprime(d)};
}

struct GenusFieldReport {
    Integer order;
    std::optional<FinAbGroup> structure;
};

/// [H^1(G, U_K)] = h_F ∏ e_v. The structure is known when h_F = 1, or under the class-exponent
/// condition once C_F is known: pass it as class_group, or let a squarefree h_F force it cyclic.
inline GenusFieldReport genus_field_h1(Integer const& h_F, std::vector<Integer> const& e_list,
                                       bool class_exponent_condition,
                                       std::optional<FinAbGroup> const& class_group = std::nullopt) {
    if (h_F < 1) throw PreconditionError("h_F must be positive");
    for (auto const& e : e_list)
        if (e < 1) throw PreconditionError("ramification indices must be positive");
    if (class_group && class_group->order() != h_F) throw PreconditionError("class group order differs from h_F");
    GenusFieldReport r{h_F * product_of(e_list), std::nullopt};
    FinAbGroup E = FinAbGroup::from_cyclic_orders(e_list);
    if (h_F == 1) {
        r.structure = E;
    } else if (class_exponent_condition) {
        if (class_group) {
            r.structure = abelian::direct_sum(*class_group, E);
        } else {
            bool squarefree = true;
            for (Integer d = 2; d * d <= h_F; ++d)
                if (h_F % (d * d) == 0) squarefree = false;
            if (squarefree) r.structure = abelian::direct_sum(FinAbGroup::cyclic(h_F), E);
        }
    }
    return r;
}

struct ImaginaryReport {
    Integer ckg_order;
    FinAbGroup h1_class;
    std::optional<FinAbGroup> cor62_structure;
};

/// Needs exactly one place of K above S and gcd(n, q' − 1) = 1.
inline ImaginaryReport imaginary_report(ExtensionProfile const& p, Integer const& h_FS) {
    if (p.base != profile::BaseKind::FunctionField || !p.q)
        throw HypothesisError("imaginary_report needs a function-field profile");
    if (p.places_of_K_above_s() != 1) throw HypothesisError("needs exactly one place of K above S");
    std::int64_t qp = p.q_prime.value_or(*p.q);
    if (gcd(Integer(p.n), Integer(qp - 1)) != 1) throw HypothesisError("n is not prime to q' - 1");
    if (h_FS < 1) throw PreconditionError("h_FS must be positive");

    ImaginaryReport r{h_FS, b_group(p), std::nullopt};
    auto outside = p.ramified_outside_s();
    for (auto const* v : outside) r.ckg_order *= v->e;

    auto [pr, k] = prime_power(*p.q);
    bool as_shape = h_FS == 1 && p.n == pr;
    for (auto const* v : outside) as_shape = as_shape && v->e == pr;
    if (as_shape) r.cor62_structure = FinAbGroup::from_cyclic_orders(std::vector<Integer>(outside.size(), Integer(pr)));
    return r;
}

struct LargeSReport {
    FinAbGroup b;
    bool one_ramified_others_split = false;
    std::vector<std::string> identifications;
};

inline LargeSReport large_s_report(ExtensionProfile const& p) {
    for (auto const& v : p.places)
        if (v.ramified && !v.in_S) throw HypothesisError("ramified place " + v.id + " lies outside S");
    LargeSReport r{b_group(p), false,
                   {"ker j = H^1(G, U_{K,S})", "coker j = Sha^2(G, U_{K,S})"}};
    std::size_t ramified = 0;
    bool others_split = true;
    for (auto const& v : p.places) {
        if (v.ramified) ++ramified;
        else if (v.local_degree != 1) others_split = false;
    }
    if (ramified == 1 && others_split) {
        r.one_ramified_others_split = true;
        r.identifications.push_back("coker j = H^2(G, U_{K,S})");
    }
    return r;
}

/// ∏d/D elements at least in H^1(G, C_{K,S}).
inline Integer h1_class_lower_bound(ExtensionProfile const& p, bool h2_units_trivial) {
    if (!h2_units_trivial) throw HypothesisError("h1_class_lower_bound needs H^2(G, U_{K,S}) = 0");
    return detail::b_order(p);
}

struct OrderRelations {
    bool kernel_relation;
    bool herbrand_relation;
};

/// [ker j]·∏ e_v = [H^1]·[coker j'] and n·[Ĥ^0] = [H^1]·∏_S [K_w : F_v].
inline OrderRelations order_relation_check(Integer const& ker_j, Integer const& h1_units, Integer const& coker_jprime,
                                           std::vector<Integer> const& e_list, Integer const& h0_hat,
                                           std::vector<Integer> const& local_degrees_S, Integer const& n) {
    for (auto const* x : {&ker_j, &h1_units, &coker_jprime, &h0_hat, &n})
        if (*x < 1) throw PreconditionError("orders must be positive");
    return {ker_j * product_of(e_list) == h1_units * coker_jprime,
            n * h0_hat == h1_units * product_of(local_degrees_S)};
}

/// gcd(n, (n/e_i) deg_i).
inline Integer delta_index(std::int64_t n, std::vector<Ramification> const& ram) {
    if (n < 1) throw PreconditionError("n must be positive");
    Integer d = n;
    for (auto const& r : ram) {
        if (r.e < 1 || r.deg < 1) throw PreconditionError("e_i and deg_i must be positive");
        if (n % r.e != 0) throw PreconditionError("e_i must divide n");
        d = gcd(d, Integer(n / r.e) * r.deg);
    }
    return d;
}

/// m(P) = gcd((q^deg − 1)/gcd(q^deg − 1, e), q − 1).
inline Integer m_of_place(std::int64_t q, Ramification const& r) {
    Integer qd = ipow(q, static_cast<unsigned>(r.deg)) - 1;
    return gcd(qd / gcd(qd, Integer(r.e)), Integer(q - 1));
}

inline Integer m_invariant(std::int64_t q, std::vector<Ramification> const& ram) {
    if (ram.empty()) throw PreconditionError("m is undefined without ramified primes");
    if (prime_power(q).first == 0) throw PreconditionError("q must be a prime power");
    Integer m = 0;
    for (auto const& r : ram) {
        if (r.e < 1 || r.deg < 1) throw PreconditionError("e_i and deg_i must be positive");
        m = gcd(m, m_of_place(q, r));
    }
    return m;
}

/// ∏e_i / lcm(e_i) ≡ 0 mod (q − 1)/m. With no ramification m is taken to be q − 1.
inline bool prop86_check(std::int64_t q, std::int64_t n, std::vector<Ramification> const& ram) {
    (void)n;
    if (ram.empty()) return true;
    std::vector<Integer> e;
    for (auto const& r : ram) e.emplace_back(r.e);
    Integer lhs = product_of(e) / lcm_of(e);
    Integer modulus = Integer(q - 1) / m_invariant(q, ram);
    return lhs % modulus == 0;
}

/// [J_K^G] = [J_F]·[H^1(G, K*/k'*)]·∏e_i / ((n/δ')·[H^1(G, k'*)]).
inline Integer chevalley_ff(Integer const& jF_order, Integer const& h1_Kmod_order, std::vector<Integer> const& e_list,
                            std::int64_t n, std::int64_t delta_prime, Integer const& h1_const_order) {
    if (jF_order < 1 || h1_Kmod_order < 1 || h1_const_order < 1 || n < 1 || delta_prime < 1)
        throw PreconditionError("orders must be positive");
    if (n % delta_prime != 0) throw PreconditionError("delta' must divide n");
    Integer num = jF_order * h1_Kmod_order * product_of(e_list);
    Integer den = Integer(n / delta_prime) * h1_const_order;
    if (num % den != 0)
        throw ValidationError("inconsistent inputs: " + capitula::to_string(num) + "/" + capitula::to_string(den) + " is not an integer");
    return num / den;
}

/// max(0, s(s+1)/2 − r).
inline Integer rank_bound_87(std::int64_t s, std::int64_t ell, std::int64_t r) {
    if (!is_prime(ell)) throw PreconditionError("ell must be prime");
    if (s < 1 || r < 0) throw PreconditionError("needs s >= 1 and r >= 0");
    Integer v = Integer(s) * (s + 1) / 2 - r;
    return v > 0 ? v : Integer(0);
}

/// Caller-asserted hypotheses for analyze().
struct Hypotheses {
    bool units_are_norms = false;
    bool h2_units_trivial = false;
};

struct FormulaReport {
    std::map<std::string, Integer> d_map;
    Integer D = 0;
    std::optional<Integer> n0;
    FinAbGroup b_group;
    std::map<std::string, Bound> bounds;
    std::map<std::string, FinAbGroup> structures;
    std::map<std::string, Integer> ff_invariants;
    std::map<std::string, bool> flags;
    std::map<std::string, std::string> identifications;
};

/// Runs every calculator whose hypotheses hold for the profile.
inline FormulaReport analyze(ExtensionProfile const& p, Hypotheses const& hyp = {}) {
    FormulaReport r;
    r.d_map = profile::compute_dv(p);
    r.D = profile::compute_D(p);
    bool const cyclic = p.group.is_cyclic();
    if (Integer(p.n) % r.D == 0) r.n0 = Integer(p.n) / r.D;
    r.b_group = b_group(p);
    r.flags["cyclic"] = cyclic;

    if (cyclic) {
        r.bounds["hilbert94"] = {hilbert94_lower_bound(p), BoundKind::Divisor};
        auto ni = norm_index_report(p);
        r.bounds["norm_index_divisor"] = {ni.divisor_bound, BoundKind::Divisor};
        r.flags["all_s_units_norms"] = ni.all_units_norms;
    }
    r.flags["units_are_norms"] = hyp.units_are_norms;
    if (cyclic && hyp.units_are_norms)
        r.bounds["coker_lower"] = {coker_lower_bound(p, true), BoundKind::LowerBound};
    r.flags["h2_units_trivial"] = hyp.h2_units_trivial;
    if (hyp.h2_units_trivial) r.bounds["h1_class_lower"] = {h1_class_lower_bound(p, true), BoundKind::LowerBound};

    bool semisimple = p.h_KS && gcd(Integer(p.n), *p.h_KS) == 1;
    r.flags["semisimple"] = semisimple;
    if (semisimple) {
        auto s = semisimple_report(p, *p.h_KS);
        r.structures["semisimple_h2"] = s.h2_units;
        if (s.ker_j_order) r.bounds["ker_j"] = {*s.ker_j_order, BoundKind::Exact};
    }

    bool imaginary = p.base == profile::BaseKind::FunctionField && p.q && p.places_of_K_above_s() == 1 &&
                     gcd(Integer(p.n), Integer(p.q_prime.value_or(*p.q) - 1)) == 1;
    r.flags["imaginary"] = imaginary;
    if (imaginary) {
        auto im = imaginary_report(p, p.h_FS.value_or(1));
        r.bounds["ckg_order"] = {im.ckg_order, BoundKind::Exact};
        r.structures["h1_class"] = im.h1_class;
        if (im.cor62_structure) r.structures["imaginary_CKG"] = *im.cor62_structure;
    }

    bool large_s = true;
    for (auto const& v : p.places) large_s = large_s && (v.in_S || !v.ramified);
    r.flags["large_s"] = large_s;
    if (large_s) {
        auto ls = large_s_report(p);
        r.flags["one_ramified_others_split"] = ls.one_ramified_others_split;
        for (std::size_t i = 0; i < ls.identifications.size(); ++i)
            r.identifications["large_s_" + std::to_string(i)] = ls.identifications[i];
    }

    if (p.base == profile::BaseKind::FunctionField && p.q && cyclic) {
        std::vector<Ramification> ram;
        bool degrees_known = true;
        for (auto const& v : p.places)
            if (v.ramified) {
                if (!v.deg) degrees_known = false;
                else ram.push_back({v.e, *v.deg});
            }
        if (degrees_known) {
            r.ff_invariants["delta"] = delta_index(p.n, ram);
            if (!ram.empty()) {
                r.ff_invariants["m"] = m_invariant(*p.q, ram);
                r.flags["ramification_congruence"] = prop86_check(*p.q, p.n, ram);
            }
        }
    }
    return r;
}

}  // namespace capitula::formulas
