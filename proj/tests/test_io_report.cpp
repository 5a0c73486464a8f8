#include <gtest/gtest.h>

#include <filesystem>

#include "capitula/io.hpp"
#include "capitula/report.hpp"

using namespace capitula;
using io::json;
using io::ParseError;

namespace {

std::string data(std::string const& rel) { return (std::filesystem::path(CAPITULA_DATA_DIR) / rel).string(); }

json minimal_profile() {
    return json::parse(R"({"base": "number", "n": 2, "group": "cyclic",
                           "places": [{"id": "inf", "in_S": true, "e": 1, "f": 1}]})");
}

json minimal_curve() {
    return json::parse(R"({"kind": "artin_schreier", "q": 2, "p_or_l": 2, "Q_or_f": {"num": [0, 0, 0, 1]}})");
}

}  // namespace

TEST(ParseProfile, Minimal) {
    auto in = io::parse_profile(minimal_profile());
    EXPECT_EQ(in.profile.n, 2);
    EXPECT_EQ(in.profile.base, profile::BaseKind::NumberField);
    ASSERT_EQ(in.profile.places.size(), 1u);
    EXPECT_EQ(in.profile.places[0].local_degree, 1);
    EXPECT_FALSE(in.units_are_norms);
}

TEST(ParseProfile, FunctionFieldAndHypotheses) {
    auto j = minimal_profile();
    j["base"] = json{{"function", json{{"q", 3}}}};
    j["hypotheses"] = json{{"units_are_norms", true}};
    j["places"][0]["deg"] = 1;
    j["h_FS"] = "1";
    auto in = io::parse_profile(j);
    EXPECT_EQ(*in.profile.q, 3);
    EXPECT_TRUE(in.units_are_norms);
    EXPECT_EQ(*in.profile.places[0].deg, 1);
    EXPECT_EQ(*in.profile.h_FS, 1);
}

TEST(ParseProfile, Rejections) {
    auto bad = [](auto mutate) {
        auto j = minimal_profile();
        mutate(j);
        EXPECT_THROW(io::parse_profile(j), ParseError) << j.dump();
    };
    bad([](json& j) { j["colour"] = 1; });
    bad([](json& j) { j.erase("base"); });
    bad([](json& j) { j["base"] = "numbers"; });
    bad([](json& j) { j["n"] = "two"; });
    bad([](json& j) { j["n"] = 2.5; });
    bad([](json& j) { j["group"] = "dihedral"; });
    bad([](json& j) { j["places"] = json::object(); });
    bad([](json& j) { j["places"][0]["id"] = 7; });
    bad([](json& j) { j["places"][0]["extra"] = 1; });
    bad([](json& j) { j["places"][0]["in_S"] = "yes"; });
    bad([](json& j) { j["hypotheses"] = json{{"everything", true}}; });
    bad([](json& j) { j["h_KS"] = "12x"; });
}

TEST(ParseProfile, BigIntegersAsStrings) {
    auto j = minimal_profile();
    j["h_KS"] = "123456789012345678901234567890";
    auto in = io::parse_profile(j);
    EXPECT_EQ(in.profile.h_KS->str(), "123456789012345678901234567890");
    EXPECT_EQ(io::encode(*in.profile.h_KS), json("123456789012345678901234567890"));
    EXPECT_EQ(io::encode(Integer(42)), json(42));
}

TEST(ParseProfile, EncodeRoundTrip) {
    for (auto const* f : {"profiles/cyclic_n9.json", "profiles/coprime_d.json", "profiles/two_ramified_in_s.json",
                          "profiles/local_h2_violation.json"}) {
        auto in = io::parse_profile(io::read_json_file(data(f)));
        auto j = io::encode(in.profile);
        auto again = io::encode(io::parse_profile(j).profile);
        EXPECT_EQ(j.dump(), again.dump()) << f;
    }
}

TEST(ParseCurve, Minimal) {
    auto in = io::parse_curve(minimal_curve());
    EXPECT_EQ(in.curve.genus(), 1);
    EXPECT_EQ(in.curve.q(), 2);
    EXPECT_TRUE(in.name.empty());
}

TEST(ParseCurve, Rejections) {
    auto bad = [](auto mutate) {
        auto j = minimal_curve();
        mutate(j);
        EXPECT_THROW(io::parse_curve(j), ParseError) << j.dump();
    };
    bad([](json& j) { j["kind"] = "hyperelliptic"; });
    bad([](json& j) { j["p_or_l"] = 3; });
    bad([](json& j) { j["q"] = 1; });
    bad([](json& j) { j["Q_or_f"]["den"] = json::array({0}); });
    bad([](json& j) { j["Q_or_f"]["num"] = "t^3"; });
    bad([](json& j) { j.erase("Q_or_f"); });
    bad([](json& j) { j["genus"] = 1; });
}

TEST(ParseCurve, MathematicalErrorsAreNotParseErrors) {
    auto j = minimal_curve();
    j["Q_or_f"]["num"] = json::array({0, 1, 1});  // t^2 + t = h^2 + h with h = t
    EXPECT_THROW(io::parse_curve(j), DegenerateExtension);
    auto k = json::parse(R"({"kind": "kummer", "q": 5, "p_or_l": 3, "Q_or_f": {"num": [0, 1]}})");
    EXPECT_THROW(io::parse_curve(k), PreconditionError);
}

TEST(ParsePlaces, Lists) {
    fforacle::BaseField K(3);
    auto ps = io::parse_places(K, "inf, t, t^2+1, t+2");
    ASSERT_EQ(ps.size(), 4u);
    EXPECT_TRUE(ps[0].infinite);
    EXPECT_EQ(ps[1].name(), "t");
    EXPECT_EQ(ps[2].degree, 2);
    EXPECT_EQ(ps[3].name(), "t+2");
    for (auto const* s : {"", "t^2+2", "2*t+1", "1", "t^", "3*t", "t+t", "x+1", "t**2"})
        EXPECT_THROW(io::parse_places(K, s), ParseError) << s;
}

TEST(ReadJson, Errors) {
    EXPECT_THROW(io::read_json_file("/nonexistent/file.json"), ParseError);
    auto tmp = std::filesystem::temp_directory_path() / "capitula_bad.json";
    {
        std::ofstream out(tmp);
        out << "{\"n\": ";
    }
    EXPECT_THROW(io::read_json_file(tmp.string()), ParseError);
    std::filesystem::remove(tmp);
}

TEST(Analyze, CorpusProfiles) {
    auto n9 = report::analyze(io::parse_profile(io::read_json_file(data("profiles/cyclic_n9.json"))));
    ASSERT_TRUE(n9.ok());
    EXPECT_EQ(n9.formulas->bounds.at("hilbert94").value, 3);
    EXPECT_TRUE(report::all_pass(n9.verdicts));

    auto v = report::analyze(io::parse_profile(io::read_json_file(data("profiles/local_h2_violation.json"))));
    EXPECT_FALSE(v.ok());
    ASSERT_EQ(v.validation.violations.size(), 1u);
    EXPECT_EQ(v.validation.violations[0].rule, "local-h2");
    EXPECT_EQ(v.validation.violations[0].place, "v");
    EXPECT_FALSE(v.formulas);
    EXPECT_NE(report::to_text(v).find("local-h2"), std::string::npos);

    auto two = report::analyze(io::parse_profile(io::read_json_file(data("profiles/two_ramified_in_s.json"))));
    ASSERT_TRUE(two.ok());
    EXPECT_EQ(two.formulas->b_group.order(), 2);
}

TEST(Analyze, IncompleteProfileIsReported) {
    auto j = minimal_profile();
    j["group"] = "general";
    j["places"].push_back(json{{"id", "v"}, {"e", 2}, {"f", 1}});
    auto r = report::analyze(io::parse_profile(j));
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(r.error.has_value());
}

TEST(Json, AnalyzeRoundTripIsCanonical) {
    for (auto const* f : {"profiles/cyclic_n9.json", "profiles/cyclic_n5_unramified.json", "profiles/coprime_d.json",
                          "profiles/two_ramified_in_s.json", "profiles/local_h2_violation.json"}) {
        auto in = io::parse_profile(io::read_json_file(data(f)));
        auto text = report::to_json(in, report::analyze(in)).dump(2);
        EXPECT_EQ(json::parse(text).dump(2), text) << f;
    }
}

TEST(Json, OracleRoundTripIsCanonical) {
    auto in = io::parse_curve(io::read_json_file(data("curves/as_f2_t3_inv_t.json")));
    auto r = report::run_oracle(in.curve, {}, in.name);
    auto j = report::to_json(r);
    auto text = j.dump(2);
    EXPECT_EQ(json::parse(text).dump(2), text);
    EXPECT_EQ(j["curve"]["h"], 8);
    EXPECT_EQ(j["curve"]["name"], "as_f2_t3_inv_t");
    EXPECT_EQ(j["picard"]["group"]["invariant_factors"], json::array({8}));
    EXPECT_EQ(j["capitulation"]["C_KS_invariants"]["order"], 2);
    for (auto const& v : j["verdicts"]) EXPECT_TRUE(v["pass"].get<bool>()) << v.dump();
}

TEST(Text, OracleSummary) {
    auto in = io::parse_curve(io::read_json_file(data("curves/as_f2_t3.json")));
    auto text = report::to_text(report::run_oracle(in.curve, {}, in.name));
    EXPECT_NE(text.find("h=3, Pic0=Z/3"), std::string::npos) << text;
    EXPECT_EQ(text.find("FAIL"), std::string::npos) << text;
}

TEST(Text, KernelSumEncoding) {
    std::vector<Integer> d{4, 4, 2};
    auto g = abelian::sum_map_kernel(d, 4);
    EXPECT_EQ(g.order(), 8);
    auto j = io::encode(g);
    EXPECT_EQ(j["order"], 8);
    EXPECT_EQ(j["invariant_factors"], json::array({2, 4}));
}
