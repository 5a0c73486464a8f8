#include <gtest/gtest.h>

#include <filesystem>

#include "capitula/io.hpp"
#include "capitula/report.hpp"

using namespace capitula;
using namespace capitula::fforacle;
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

Place at(Curve const& c, std::vector<long long> coeffs) {
    return c.base().place_of(poly::from_ints(c.base().F(), coeffs));
}

profile::PlaceProfile const* find(profile::ExtensionProfile const& p, std::string const& id) {
    for (auto const& v : p.places)
        if (v.id == id) return &v;
    return nullptr;
}

}  // namespace

TEST(RealizeProfile, EllipticAS) {
    auto c = as(2, {0, 0, 0, 1});
    auto p = realize_profile(c, {Place::infinity()}, 3);
    EXPECT_EQ(p.n, 2);
    EXPECT_EQ(*p.q, 2);
    ASSERT_EQ(p.places.size(), 1u);
    EXPECT_TRUE(p.places[0].in_S);
    EXPECT_EQ(p.places[0].e, 2);
    EXPECT_EQ(profile::compute_dv(p).at(p.places[0].id), 2);
    EXPECT_EQ(*p.h_FS, 1);
    EXPECT_EQ(*p.h_KS, 3);
    EXPECT_TRUE(profile::validate(p).ok());
}

TEST(RealizeProfile, FiniteRamification) {
    auto c = as(2, {1, 0, 0, 0, 1}, {0, 1});
    auto p = realize_profile(c, {Place::infinity()}, 8);
    auto const* t = find(p, "t");
    ASSERT_NE(t, nullptr);
    EXPECT_FALSE(t->in_S);
    EXPECT_EQ(t->e, 2);
    EXPECT_EQ(*t->deg, 1);
    EXPECT_EQ(p.ramified_outside_s().size(), 1u);
}

TEST(RealizeProfile, SplitPlaceInS) {
    auto c = kummer(3, 2, {0, 1});
    // t + 2 splits in y^2 = t
    auto p = realize_profile(c, {at(c, {2, 1})}, 1);
    auto const* s = find(p, "t+2");
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->e, 1);
    EXPECT_EQ(s->f, 1);
    EXPECT_EQ(profile::compute_dv(p).at("t+2"), 1);  // local degree of a split place
    EXPECT_EQ(profile::compute_dv(p).at("t"), 2);
    EXPECT_EQ(p.places.size(), 3u);
}

TEST(SPrime, Errors) {
    auto c = as(2, {0, 0, 0, 1});
    EXPECT_THROW(s_prime(c, {}), PreconditionError);
    EXPECT_THROW(s_prime(c, {Place::infinity(), Place::infinity()}), PreconditionError);
}

TEST(Capitulation, EllipticAtInfinity) {
    auto c = as(2, {0, 0, 0, 1});
    auto pd = picard_group(c);
    auto cap = capitulation(pd, {Place::infinity()});
    EXPECT_EQ(cap.h_FS, 1);
    EXPECT_EQ(cap.s_k_count, 1u);
    EXPECT_EQ(cap.c_ks.group, G({3}));
    EXPECT_TRUE(cap.c_ks_invariants.is_trivial());
    EXPECT_EQ(cap.ker_j, 1);
    EXPECT_EQ(cap.coker_jprime, 1);
}

TEST(Capitulation, SplitPlaceKillsTheClassGroup) {
    // (0,0) - O has order 3 and t splits, so C_{K,S} = 0
    auto c = as(2, {0, 0, 0, 1});
    std::vector<Place> S{Place::infinity(), at(c, {0, 1})};
    auto pd = picard_group(c, {}, S);
    auto cap = capitulation(pd, S);
    EXPECT_EQ(cap.s_k_count, 3u);
    EXPECT_TRUE(cap.c_ks.group.is_trivial());
}

TEST(Capitulation, DegreeTwoS) {
    // S = {t^2+t+1}: C_{F,S} = Z/2 and j is read off conorm(inf)
    auto c = as(2, {0, 0, 0, 1});
    std::vector<Place> S{at(c, {1, 1, 1})};
    auto pd = picard_group(c, {}, S);
    auto cap = capitulation(pd, S);
    EXPECT_EQ(cap.h_FS, 2);
    EXPECT_EQ(cap.s_k_count, 2u);
    EXPECT_EQ(cap.image_j * cap.ker_j, cap.h_FS);
    EXPECT_EQ(cap.transgressive % cap.image_j, 0);
    auto p = realize_profile(c, S, cap.c_ks.group.order());
    EXPECT_EQ(cap.ker_j % formulas::hilbert94_lower_bound(p), 0);
}

TEST(Capitulation, SizesAreConsistent) {
    std::vector<Curve> cs{as(2, {1, 0, 0, 0, 1}, {0, 1}), as(3, {1, 0, 1}, {0, 1}), kummer(3, 2, {0, 2, 0, 1}),
                          kummer(4, 3, {0, 1, 1}), kummer(3, 2, {1, 0, 0, 0, 1})};
    for (auto const& c : cs) {
        auto pd = picard_group(c);
        auto cap = capitulation(pd, {Place::infinity()});
        SCOPED_TRACE(c.description());
        EXPECT_EQ(cap.image_j * cap.ker_j, cap.h_FS);
        EXPECT_EQ(cap.c_ks.group.order() % cap.c_ks_invariants.order(), 0);
        EXPECT_EQ(cap.c_ks_invariants.order() % cap.transgressive, 0);
    }
}

TEST(AmbiguousClasses, BothSidesAgree) {
    std::vector<Curve> cs{as(2, {0, 0, 0, 1}),          as(2, {1, 0, 0, 0, 1}, {0, 1}), as(2, {1, 0, 0, 0, 1, 1}, {0, 1, 1}),
                          as(3, {0, 0, 1}),             as(3, {1, 0, 1}, {0, 1}),      as(4, {0, 0, 0, 1}),
                          kummer(3, 2, {0, 1}),         kummer(3, 2, {0, 2, 0, 1}),    kummer(3, 2, {1, 0, 0, 0, 1}),
                          kummer(3, 2, {0, 2, 0, 0, 0, 1}), kummer(4, 3, {0, 1, 1})};
    for (auto const& c : cs) {
        auto a = ambiguous_class_check(picard_group(c));
        EXPECT_TRUE(a.holds()) << c.description() << " lhs=" << a.lhs << " rhs=" << a.rhs;
        EXPECT_EQ(Integer(c.n()) % a.delta, 0);
        EXPECT_EQ(a.delta % a.delta_prime, 0);
    }
}

TEST(AmbiguousClasses, UnramifiedConstantFieldTwist) {
    // y^2 = t^4 + 1 over F_3 ramifies only at two degree-two places, so delta = delta' = 2
    auto a = ambiguous_class_check(picard_group(kummer(3, 2, {1, 0, 0, 0, 1})));
    EXPECT_EQ(a.delta, 2);
    EXPECT_EQ(a.delta_prime, 2);
    EXPECT_EQ(a.lhs, 4);
    EXPECT_TRUE(a.holds());
}

TEST(Imaginary, ArtinSchreierStructure) {
    // one place above infinity and n prime to q - 1: C_{K,S}^G = (Z/p)^r, r finite ramified places
    struct Row {
        Curve c;
        FinAbGroup want;
    };
    std::vector<Row> rows{{as(2, {0, 0, 0, 1}), G({})},
                          {as(2, {1, 0, 0, 0, 1}, {0, 1}), G({2})},
                          {as(2, {1, 0, 0, 0, 1, 1}, {0, 1, 1}), G({2, 2})},
                          {as(3, {1, 0, 1}, {0, 1}), G({3})}};
    for (auto const& r : rows) {
        auto pd = picard_group(r.c);
        auto cap = capitulation(pd, {Place::infinity()});
        EXPECT_EQ(cap.c_ks_invariants, r.want) << r.c.description();
        auto p = realize_profile(r.c, {Place::infinity()}, cap.c_ks.group.order());
        auto im = formulas::imaginary_report(p, cap.h_FS);
        EXPECT_EQ(im.ckg_order, r.want.order());
        ASSERT_TRUE(im.cor62_structure);
        EXPECT_EQ(*im.cor62_structure, r.want);
    }
}

TEST(OrderRelations, OnePlaceAboveS) {
    for (auto const& c : {kummer(3, 2, {0, 1}), kummer(3, 2, {0, 2, 0, 1}), as(2, {1, 0, 0, 0, 1}, {0, 1})}) {
        auto pd = picard_group(c);
        auto cap = capitulation(pd, {Place::infinity()});
        auto p = realize_profile(c, {Place::infinity()}, cap.c_ks.group.order());
        auto in = order_relation_inputs(c, p, cap);
        auto rel = formulas::order_relation_check(in.ker_j, in.h1_units, in.coker_jprime, in.e_list, in.h0_hat,
                                                  in.local_degrees_S, in.n);
        EXPECT_TRUE(rel.kernel_relation) << c.description();
        EXPECT_TRUE(rel.herbrand_relation) << c.description();
    }
}

TEST(OrderRelations, NeedOnePlace) {
    auto c = kummer(3, 2, {0, 1});
    std::vector<Place> S{at(c, {2, 1})};
    auto pd = picard_group(c, {}, S);
    auto cap = capitulation(pd, S);
    EXPECT_EQ(cap.s_k_count, 2u);
    auto p = realize_profile(c, S, cap.c_ks.group.order());
    EXPECT_THROW(order_relation_inputs(c, p, cap), HypothesisError);
}

TEST(RunOracle, CorpusVerdictsPass) {
    namespace fs = std::filesystem;
    int seen = 0;
    for (auto const& e : fs::directory_iterator(fs::path(CAPITULA_DATA_DIR) / "curves")) {
        auto in = io::parse_curve(io::read_json_file(e.path().string()));
        auto r = report::run_oracle(in.curve, {}, in.name);
        ++seen;
        EXPECT_FALSE(r.verdicts.empty());
        for (auto const& v : r.verdicts) EXPECT_TRUE(v.pass) << in.name << ": " << v.anchor << " " << v.check;
    }
    EXPECT_GE(seen, 10);
}

TEST(RunOracle, LargerS) {
    auto c = as(2, {0, 0, 0, 1});
    report::OracleOptions opt;
    opt.S = std::vector<Place>{Place::infinity(), at(c, {0, 1})};
    auto r = report::run_oracle(c, opt);
    EXPECT_EQ(r.cap.s_k_count, 3u);
    EXPECT_TRUE(report::all_pass(r.verdicts));
}
