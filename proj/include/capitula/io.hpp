#pragma once

// JSON input (profiles, curves, place lists) and JSON encodings of result types.

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "capitula/abelian.hpp"
#include "capitula/error.hpp"
#include "capitula/fforacle/curve.hpp"
#include "capitula/fforacle/poly.hpp"
#include "capitula/integer.hpp"
#include "capitula/profile.hpp"

namespace capitula::io {

using nlohmann::json;

/// Malformed input: bad JSON, wrong types, unknown keys.
class ParseError : public Error {
public:
    using Error::Error;
};

inline json read_json_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (json::parse_error const& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace detail {

inline void check_keys(json const& j, std::set<std::string> const& allowed, std::string const& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (auto const& [k, v] : j.items())
        if (!allowed.count(k)) throw ParseError(where + ": unknown key \"" + k + "\"");
}

inline std::int64_t get_int(json const& j, std::string const& key, std::string const& where) {
    if (!j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
    auto const& v = j.at(key);
    if (!v.is_number_integer()) throw ParseError(where + ": \"" + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

inline bool get_bool(json const& j, std::string const& key, std::string const& where, bool dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_boolean()) throw ParseError(where + ": \"" + key + "\" must be a boolean");
    return j.at(key).get<bool>();
}

/// Integers may be JSON integers or decimal strings (for values beyond 64 bits).
inline Integer get_integer(json const& v, std::string const& where) {
    if (v.is_number_integer()) return Integer(v.get<std::int64_t>());
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos)
            throw ParseError(where + ": not an integer: " + s);
        return Integer(s);
    }
    throw ParseError(where + ": expected an integer");
}

inline std::vector<long long> coeffs(json const& j, std::string const& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array of integers");
    std::vector<long long> out;
    for (auto const& c : j) {
        if (!c.is_number_integer()) throw ParseError(where + ": coefficients must be integers");
        out.push_back(c.get<long long>());
    }
    return out;
}

}  // namespace detail

struct ProfileInput {
    profile::ExtensionProfile profile;
    bool units_are_norms = false;
    bool h2_units_trivial = false;
};

/// Profile schema; "archimedean" (per place) and "hypotheses" are optional additions.
inline ProfileInput parse_profile(json const& j) {
    using namespace profile;
    using detail::check_keys;
    check_keys(j, {"base", "n", "group", "h_FS", "h_KS", "q_prime", "places", "hypotheses"}, "profile");
    ProfileInput in;
    auto& p = in.profile;

    if (!j.contains("base")) throw ParseError("profile: missing \"base\"");
    auto const& b = j.at("base");
    if (b.is_string() && b.get<std::string>() == "number") {
        p.base = BaseKind::NumberField;
    } else if (b.is_object()) {
        check_keys(b, {"function"}, "base");
        if (!b.contains("function")) throw ParseError("base: expected \"function\"");
        check_keys(b.at("function"), {"q"}, "base.function");
        p.base = BaseKind::FunctionField;
        p.q = detail::get_int(b.at("function"), "q", "base.function");
    } else {
        throw ParseError("profile: \"base\" must be \"number\" or {\"function\": {\"q\": ...}}");
    }

    p.n = detail::get_int(j, "n", "profile");

    if (!j.contains("group")) throw ParseError("profile: missing \"group\"");
    auto const& g = j.at("group");
    if (g.is_string() && g.get<std::string>() == "cyclic") {
        p.group = GroupShape::cyclic();
    } else if (g.is_string() && g.get<std::string>() == "general") {
        p.group = GroupShape::general();
    } else if (g.is_object()) {
        check_keys(g, {"abelian"}, "group");
        if (!g.contains("abelian")) throw ParseError("group: expected \"abelian\"");
        std::vector<std::int64_t> orders;
        for (auto x : detail::coeffs(g.at("abelian"), "group.abelian")) orders.push_back(x);
        p.group = GroupShape::abelian(orders);
    } else {
        throw ParseError("profile: \"group\" must be \"cyclic\", \"general\" or {\"abelian\": [...]}");
    }

    if (j.contains("h_FS")) p.h_FS = detail::get_integer(j.at("h_FS"), "h_FS");
    if (j.contains("h_KS")) p.h_KS = detail::get_integer(j.at("h_KS"), "h_KS");
    if (j.contains("q_prime")) p.q_prime = detail::get_int(j, "q_prime", "profile");

    if (!j.contains("places") || !j.at("places").is_array()) throw ParseError("profile: \"places\" must be an array");
    std::size_t idx = 0;
    for (auto const& v : j.at("places")) {
        std::string where = "places[" + std::to_string(idx++) + "]";
        check_keys(v, {"id", "in_S", "e", "f", "deg", "h2_local_order", "archimedean"}, where);
        if (!v.contains("id") || !v.at("id").is_string()) throw ParseError(where + ": \"id\" must be a string");
        PlaceProfile pl;
        pl.id = v.at("id").get<std::string>();
        pl.in_S = detail::get_bool(v, "in_S", where, false);
        pl.archimedean = detail::get_bool(v, "archimedean", where, false);
        pl.e = detail::get_int(v, "e", where);
        pl.f = v.contains("f") ? detail::get_int(v, "f", where) : 1;
        pl.local_degree = pl.e * pl.f;
        pl.ramified = !pl.archimedean && pl.e > 1;
        if (v.contains("deg")) pl.deg = detail::get_int(v, "deg", where);
        if (v.contains("h2_local_order")) pl.h2_local_order = detail::get_integer(v.at("h2_local_order"), where);
        p.places.push_back(std::move(pl));
    }

    if (j.contains("hypotheses")) {
        auto const& h = j.at("hypotheses");
        check_keys(h, {"units_are_norms", "h2_units_trivial"}, "hypotheses");
        in.units_are_norms = detail::get_bool(h, "units_are_norms", "hypotheses", false);
        in.h2_units_trivial = detail::get_bool(h, "h2_units_trivial", "hypotheses", false);
    }
    return in;
}

struct CurveInput {
    std::string name;
    fforacle::Curve curve;
};

/// {"kind", "q", "p_or_l", "Q_or_f": {"num", "den"}}, plus an optional "name".
/// Coefficients are ascending and reduced mod p.
inline CurveInput parse_curve(json const& j) {
    using namespace fforacle;
    detail::check_keys(j, {"kind", "q", "p_or_l", "Q_or_f", "name"}, "curve");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ParseError("curve: \"kind\" must be a string");
    std::string kind = j.at("kind").get<std::string>();
    std::int64_t q = detail::get_int(j, "q", "curve");
    std::int64_t pl = detail::get_int(j, "p_or_l", "curve");
    if (!j.contains("Q_or_f")) throw ParseError("curve: missing \"Q_or_f\"");
    auto const& rf = j.at("Q_or_f");
    detail::check_keys(rf, {"num", "den"}, "Q_or_f");
    if (!rf.contains("num")) throw ParseError("Q_or_f: missing \"num\"");
    auto num = detail::coeffs(rf.at("num"), "Q_or_f.num");
    auto den = rf.contains("den") ? detail::coeffs(rf.at("den"), "Q_or_f.den") : std::vector<long long>{1};
    std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
    if (q < 2 || q > 4096) throw ParseError("curve: q out of range");
    BaseField K(q);
    Poly n = poly::from_ints(K.F(), num), d = poly::from_ints(K.F(), den);
    if (d.empty()) throw ParseError("curve: zero denominator");
    RatFunc f = RatFunc::make(K.F(), n, d);
    if (kind == "artin_schreier") {
        if (pl != K.p()) throw ParseError("curve: p_or_l must be the characteristic for Artin-Schreier curves");
        return {name, Curve::artin_schreier(q, f)};
    }
    if (kind == "kummer") return {name, Curve::kummer(q, static_cast<int>(pl), f)};
    throw ParseError("curve: kind must be \"artin_schreier\" or \"kummer\"");
}

/// "inf" or a monic irreducible polynomial written like the place names ("t^2+t+1", "2*t+1").
inline fforacle::Place parse_place(fforacle::BaseField const& K, std::string s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "inf" || t == "infinity") return fforacle::Place::infinity();
    if (t.empty()) throw ParseError("empty place name");
    fforacle::Poly p;
    std::stringstream ss(t);
    std::string term;
    while (std::getline(ss, term, '+')) {
        if (term.empty()) throw ParseError("bad place: " + s);
        long long coef = 1;
        int e = 0;
        auto tpos = term.find('t');
        try {
            if (tpos == std::string::npos) {
                coef = std::stoll(term);
            } else {
                std::string c = term.substr(0, tpos), rest = term.substr(tpos + 1);
                if (!c.empty()) {
                    if (c.back() != '*') throw ParseError("bad place: " + s);
                    coef = std::stoll(c.substr(0, c.size() - 1));
                }
                e = 1;
                if (!rest.empty()) {
                    if (rest[0] != '^') throw ParseError("bad place: " + s);
                    e = std::stoi(rest.substr(1));
                }
            }
        } catch (std::logic_error const&) {
            throw ParseError("bad place: " + s);
        }
        if (coef < 0 || coef >= K.q() || e < 0 || e > 64) throw ParseError("bad place: " + s);
        if (p.size() <= static_cast<std::size_t>(e)) p.resize(static_cast<std::size_t>(e) + 1, 0);
        if (p[e]) throw ParseError("bad place: repeated term in " + s);
        p[e] = static_cast<fforacle::Elem>(coef);
    }
    fforacle::poly::trim(p);
    if (p.size() < 2 || p.back() != 1) throw ParseError("bad place: " + s + " (need a monic polynomial)");
    try {
        return K.place_of(p);
    } catch (PreconditionError const&) {
        throw ParseError("bad place: " + s + " is not irreducible");
    }
}

inline std::vector<fforacle::Place> parse_places(fforacle::BaseField const& K, std::string const& list) {
    std::vector<fforacle::Place> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_place(K, item));
    if (out.empty()) throw ParseError("empty place list");
    return out;
}

// ---- encoders ----

/// Exact integers: JSON numbers within 64 bits, decimal strings beyond.
inline json encode(Integer const& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(x);
    return x.str();
}

inline json encode(std::vector<Integer> const& xs) {
    json a = json::array();
    for (auto const& x : xs) a.push_back(encode(x));
    return a;
}

inline json encode(abelian::FinAbGroup const& g) {
    return json{{"invariant_factors", encode(g.invariant_factors())}, {"order", encode(g.order())}};
}

inline json encode(profile::ExtensionProfile const& p) {
    json j;
    if (p.base == profile::BaseKind::NumberField) j["base"] = "number";
    else j["base"] = json{{"function", json{{"q", *p.q}}}};
    j["n"] = p.n;
    switch (p.group.kind) {
        case profile::GroupShape::Kind::Cyclic: j["group"] = "cyclic"; break;
        case profile::GroupShape::Kind::General: j["group"] = "general"; break;
        case profile::GroupShape::Kind::Abelian: j["group"] = json{{"abelian", p.group.orders}}; break;
    }
    if (p.h_FS) j["h_FS"] = encode(*p.h_FS);
    if (p.h_KS) j["h_KS"] = encode(*p.h_KS);
    if (p.q_prime) j["q_prime"] = *p.q_prime;
    json places = json::array();
    for (auto const& v : p.places) {
        json pv{{"id", v.id}, {"in_S", v.in_S}, {"e", v.e}, {"f", v.f}};
        if (v.deg) pv["deg"] = *v.deg;
        if (v.h2_local_order) pv["h2_local_order"] = encode(*v.h2_local_order);
        if (v.archimedean) pv["archimedean"] = true;
        places.push_back(pv);
    }
    j["places"] = places;
    return j;
}

}  // namespace capitula::io
