// capitula: command-line front end (analyze, kernel-sum, oracle, verify).

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "capitula/abelian.hpp"
#include "capitula/error.hpp"
#include "capitula/io.hpp"
#include "capitula/report.hpp"
#include "capitula/verify.hpp"

#ifndef CAPITULA_DATA_DIR
#define CAPITULA_DATA_DIR "data"
#endif

namespace {

using namespace capitula;
using nlohmann::json;

enum Exit { Ok = 0, Usage = 1, Invalid = 2, Resource = 3 };

struct Config {
    std::int64_t max_field_size = 4096;  // largest q^m used by the oracle
    int max_genus = 5;
    int max_degree_bound = 6;
    int max_function_degree = 12;
    std::uint64_t max_candidates = 4'000'000;
    std::string corpus_dir = std::string(CAPITULA_DATA_DIR) + "/curves";
};

Config load_config(std::string const& path, bool required) {
    Config c;
    if (!std::filesystem::exists(path)) {
        if (required) throw io::ParseError("config file not found: " + path);
        return c;
    }
    json j = io::read_json_file(path);
    io::detail::check_keys(j,
                           {"max_field_size", "max_genus", "max_degree_bound", "max_function_degree", "max_candidates",
                            "corpus_dir"},
                           "config");
    if (j.contains("max_field_size")) c.max_field_size = io::detail::get_int(j, "max_field_size", "config");
    if (j.contains("max_genus")) c.max_genus = static_cast<int>(io::detail::get_int(j, "max_genus", "config"));
    if (j.contains("max_degree_bound"))
        c.max_degree_bound = static_cast<int>(io::detail::get_int(j, "max_degree_bound", "config"));
    if (j.contains("max_function_degree"))
        c.max_function_degree = static_cast<int>(io::detail::get_int(j, "max_function_degree", "config"));
    if (j.contains("max_candidates"))
        c.max_candidates = static_cast<std::uint64_t>(io::detail::get_int(j, "max_candidates", "config"));
    if (j.contains("corpus_dir")) {
        if (!j.at("corpus_dir").is_string()) throw io::ParseError("config: corpus_dir must be a string");
        c.corpus_dir = j.at("corpus_dir").get<std::string>();
    }
    return c;
}

/// Picard options within the configured caps; throws ResourceError if the curve is out of range.
fforacle::PicardOptions picard_options(Config const& cfg, fforacle::Curve const& c, int degree_bound) {
    if (c.genus() > cfg.max_genus)
        throw ResourceError("genus " + std::to_string(c.genus()) + " exceeds max_genus " + std::to_string(cfg.max_genus));
    int cap = 0;
    std::int64_t size = 1;
    while (cap < cfg.max_degree_bound && size * c.q() <= cfg.max_field_size) {
        size *= c.q();
        ++cap;
    }
    int start = degree_bound > 0 ? degree_bound : std::max(c.genus(), 1);
    start = std::max(start, c.genus());
    if (start > cap)
        throw ResourceError("degree bound " + std::to_string(start) + " exceeds the configured cap " + std::to_string(cap));
    fforacle::PicardOptions o;
    o.degree_bound = start;
    o.max_degree_bound = cap;
    o.max_function_degree = cfg.max_function_degree;
    o.max_candidates = cfg.max_candidates;
    return o;
}

void print_json(json const& j) { std::cout << j.dump(2) << '\n'; }

int cmd_analyze(std::string const& path, bool as_json) {
    auto in = io::parse_profile(io::read_json_file(path));
    auto r = report::analyze(in);
    if (as_json) print_json(report::to_json(in, r));
    else std::cout << report::to_text(r);
    if (!r.ok()) return Invalid;
    return report::all_pass(r.verdicts) ? Ok : Invalid;
}

int cmd_kernel_sum(std::string const& list, bool as_json) {
    std::vector<Integer> d;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            long long x = std::stoll(item, &pos);
            if (pos != item.size() || x < 1) throw std::invalid_argument(item);
            d.emplace_back(x);
        } catch (std::logic_error const&) {
            throw io::ParseError("-d expects positive integers separated by commas, got \"" + item + "\"");
        }
    }
    if (d.empty()) throw io::ParseError("-d needs at least one integer");
    Integer D = lcm_of(d);
    auto g = abelian::sum_map_kernel(d, D);
    if (as_json) {
        print_json(json{{"d", io::encode(d)}, {"D", io::encode(D)}, {"kernel", io::encode(g)}, {"anchor", "Lemma 3.2"}});
    } else if (g.is_trivial()) {
        std::cout << "trivial\n";
    } else {
        std::cout << g.to_string() << ", order " << g.order() << '\n';
    }
    return Ok;
}

int cmd_oracle(Config const& cfg, std::string const& path, std::string const& s_list, int degree_bound, bool as_json) {
    auto in = io::parse_curve(io::read_json_file(path));
    report::OracleOptions opt;
    if (!s_list.empty()) opt.S = io::parse_places(in.curve.base(), s_list);
    opt.picard = picard_options(cfg, in.curve, degree_bound);
    auto name = in.name.empty() ? std::filesystem::path(path).stem().string() : in.name;
    auto r = report::run_oracle(in.curve, opt, name);
    if (as_json) print_json(report::to_json(r));
    else std::cout << report::to_text(r);
    return report::all_pass(r.verdicts) ? Ok : Invalid;
}

int cmd_verify(Config const& cfg, std::string const& suite, std::string const& corpus_dir, bool as_json) {
    std::vector<report::Verdict> vs;
    if (suite == "abelian") {
        vs = verify::suite_abelian();
    } else if (suite == "cohomology") {
        vs = verify::suite_cohomology();
    } else if (suite == "corpus") {
        auto corpus = verify::load_corpus(corpus_dir.empty() ? cfg.corpus_dir : corpus_dir);
        std::vector<report::OracleResult> rs;
        for (auto const& c : corpus) {
            report::OracleOptions opt;
            opt.picard = picard_options(cfg, c.curve, 0);
            rs.push_back(report::run_oracle(c.curve, opt, c.name));
        }
        vs = verify::suite_corpus(rs);
    } else {
        std::cerr << "unknown suite \"" << suite << "\" (expected abelian, cohomology or corpus)\n";
        return Usage;
    }
    if (as_json) print_json(json{{"suite", suite}, {"verdicts", report::encode(vs)}, {"pass", report::all_pass(vs)}});
    else std::cout << report::render_verdicts(vs) << (report::all_pass(vs) ? "ALL PASS\n" : "FAILURES\n");
    return report::all_pass(vs) ? Ok : Invalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"capitula: capitulation and S-unit cohomology calculators with a function-field oracle"};
    app.require_subcommand(1);
    std::string config_path = "capitula.json";
    bool config_given = false;
    auto* copt = app.add_option("--config", config_path, "resource caps (default ./capitula.json if present)");
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::string profile_path;
    auto* analyze = app.add_subcommand("analyze", "run the calculators on a profile JSON");
    analyze->add_option("profile", profile_path, "profile JSON")->required();
    analyze->add_flag("--json", as_json, "machine-readable output");

    std::string d_list;
    auto* ksum = app.add_subcommand("kernel-sum", "kernel of the summation map on the local cyclic groups");
    ksum->add_option("-d", d_list, "comma-separated d_v")->required();
    ksum->add_flag("--json", as_json, "machine-readable output");

    std::string curve_path, s_list;
    int degree_bound = 0;
    auto* oracle = app.add_subcommand("oracle", "class groups and cross-checks for a curve JSON");
    oracle->add_option("curve", curve_path, "curve JSON")->required();
    oracle->add_option("--s", s_list, "places of S, comma-separated (default inf)");
    oracle->add_option("--degree-bound", degree_bound, "degree bound for the generator places")
        ->check(CLI::PositiveNumber);
    oracle->add_flag("--json", as_json, "machine-readable output");

    std::string suite, corpus_dir;
    auto* verify = app.add_subcommand("verify", "property suites: abelian, cohomology, corpus");
    verify->add_option("suite", suite, "suite name")->required();
    verify->add_option("--corpus", corpus_dir, "directory of curve JSON files");
    verify->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : Usage;
    }
    config_given = copt->count() > 0;

    try {
        Config cfg = load_config(config_path, config_given);
        if (*analyze) return cmd_analyze(profile_path, as_json);
        if (*ksum) return cmd_kernel_sum(d_list, as_json);
        if (*oracle) return cmd_oracle(cfg, curve_path, s_list, degree_bound, as_json);
        if (*verify) return cmd_verify(cfg, suite, corpus_dir, as_json);
    } catch (io::ParseError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    } catch (nlohmann::json::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    } catch (ResourceError const& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return Resource;
    } catch (Error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Invalid;
    }
    return Usage;
}
