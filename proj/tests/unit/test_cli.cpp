#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "oracle.hpp"
#include "ppi/cli.hpp"

using namespace ppi;

namespace {

const std::string dir = std::string(PPI_SOURCE_DIR) + "/scenarios/";

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int code = run_cli(args, o, e);
    return {code, o.str(), e.str()};
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> summary;
};

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(item);
    return v;
}

Csv parse(const std::string& text) {
    Csv c;
    std::stringstream ss(text);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.rfind("# ppi ", 0) != 0) c.summary[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        if (first) {
            c.header = split(line);
            first = false;
        } else {
            c.rows.push_back(split(line));
        }
    }
    return c;
}

double num(const std::string& s) { return std::stod(s); }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ppi_cli_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string p = temp_path(name);
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_CASE("grid specifications") {
    auto g = parse_grid("log:1:100:3");
    REQUIRE(g.size() == 3);
    CHECK(g[0] == doctest::Approx(1));
    CHECK(g[1] == doctest::Approx(10));
    CHECK(g[2] == 100);
    g = parse_grid("lin:0:1:5");
    CHECK(g.size() == 5);
    CHECK(g[2] == doctest::Approx(0.5));
    CHECK(parse_grid("list:1,2.5,7") == std::vector<double>{1, 2.5, 7});
    CHECK(parse_grid("3,4") == std::vector<double>{3, 4});
    CHECK(parse_grid("log:2:2:1") == std::vector<double>{2});
    CHECK_THROWS_AS(parse_grid("log:0:1:5"), ParamError);
    CHECK_THROWS_AS(parse_grid("log:1:2"), ParamError);
    CHECK_THROWS_AS(parse_grid("cube:1:2:3"), ParamError);
    CHECK_THROWS_AS(parse_grid("lin:1:2:2.5"), ParamError);
    CHECK_THROWS_AS(parse_grid("1,x"), ParamError);
}

TEST_CASE("hash") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("scenario files") {
    const auto p = load_scenario(dir + "fig1.json");
    CHECK(p.n() == 2);
    CHECK(p.lambda() == 2e-4);
    CHECK(p.eta() == 0);
    CHECK_THROWS_AS(load_scenario(write_temp("bad1.json", R"({"n": 2, "lambda": 1e-3})")), ParamError);
    CHECK_THROWS_AS(load_scenario(write_temp("bad2.json", R"({"n": 2.5, "lambda": 1e-3, "alpha": 3, "beta": 1, "r_T": 1})")), ParamError);
    CHECK_THROWS_AS(load_scenario(write_temp("bad3.json", "{not json")), ParamError);
    CHECK_THROWS_AS(load_scenario(write_temp("bad4.json", R"({"n": 2, "lambda": -1, "alpha": 3, "beta": 1, "r_T": 1})")), ParamError);
    const auto c = load_cost(dir + "cost_uniform.json");
    CHECK(c.c01 == 1);
    CHECK(c.c00 == 0);
}

TEST_CASE("correlation command") {
    auto r = run({"correlation", "--scenario", dir + "fig1.json"});
    REQUIRE(r.code == 0);
    auto c = parse(r.out);
    CHECK(c.rows.size() == 400);
    CHECK(num(c.rows.front()[0]) == doctest::Approx(1e-3));
    CHECK(num(c.rows.back()[0]) == doctest::Approx(1e4));
    CHECK(std::abs(num(c.summary["chi_star"]) - 2.08) < 0.02);
    CHECK(r.out.rfind("# ppi correlation config_hash=", 0) == 0);

    r = run({"correlation", "--scenario", dir + "fig1.json", "--sweep-density", "--grid", "log:1e-4:10:25"});
    REQUIRE(r.code == 0);
    c = parse(r.out);
    CHECK(c.rows.size() == 25);
    CHECK(c.header.size() == 4);
    // small-density end approaches the limits
    CHECK(num(c.rows.front()[3]) == doctest::Approx(num(c.summary["limit_delta_2_3"])).epsilon(1e-3));
}

TEST_CASE("risk command") {
    auto r = run({"risk", "--scenario", dir + "fig2.json", "--cost", dir + "cost_uniform.json", "--grid", "lin:5:60:1101"});
    REQUIRE(r.code == 0);
    auto c = parse(r.out);
    CHECK(c.rows.size() == 1101);
    CHECK(c.summary["interior"] == "true");
    const double rs = num(c.summary["r_O_star"]);
    CHECK(rs == doctest::Approx(oracle::frozen::r_star_fig2).epsilon(1e-9));
    CHECK(std::abs(num(c.summary["grid_argmin"]) - rs) <= 0.05 / 2 + 1e-12);
    CHECK(num(c.summary["dr_star_dlambda"]) > 0);
    CHECK(num(c.summary["dr_star_dsigma"]) > 0);
    int sign_changes = 0;
    for (std::size_t i = 1; i < c.rows.size(); ++i)
        sign_changes += (num(c.rows[i - 1][2]) < 0) != (num(c.rows[i][2]) < 0);
    CHECK(sign_changes == 1);

    const std::string bad = write_temp("cost_bad.json", R"({"c00": 1, "c01": 0, "c10": 0, "c11": 1})");
    r = run({"risk", "--scenario", dir + "fig2.json", "--cost", bad, "--grid", "10,20"});
    REQUIRE(r.code == 0);
    CHECK(parse(r.out).summary.count("optimization") == 1);
}

TEST_CASE("roc command") {
    auto r = run({"roc", "--scenario", dir + "fig3.json", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["rows"].size() == 400);
    const auto& s = j["summary"];
    const double rT = s["r_T"]["r_O"], rDI = s["r_DI"]["r_O"], rMM = s["r_MM"]["r_O"];
    CHECK(rT <= rDI);
    CHECK(rDI <= rMM);
    CHECK(std::abs(double(s["r_EE"]["p_I"]) - double(s["r_EE"]["p_II"])) < 1e-9);
    const auto& first = j["rows"].front();
    const auto& last = j["rows"].back();
    CHECK(double(first["p_I"]) > 0.999);
    CHECK(double(first["p_II"]) < 1e-3);
    CHECK(double(last["p_I"]) < 1e-3);
    CHECK(double(last["p_II"]) > 0.999);

    const std::string noisy = write_temp("noisy.json", R"({"n": 2, "lambda": 2e-4, "alpha": 3, "beta": 5, "r_T": 10, "eta": 3e-4})");
    r = run({"roc", "--scenario", noisy, "--grid", "10,20"});
    REQUIRE(r.code == 0);
    CHECK(parse(r.out).summary["r_DI"].rfind("omitted", 0) == 0);
}

TEST_CASE("fading-compare command") {
    auto r = run({"fading-compare", "--scenario", dir + "fig4.json"});
    REQUIRE(r.code == 0);
    auto c = parse(r.out);
    CHECK(c.rows.size() == 300);
    CHECK(std::abs(num(c.summary["peak_rho_nofade"]) - 0.8) < 0.05);
    CHECK(std::abs(num(c.summary["peak_rho_rayleigh"]) - 0.4) < 0.05);
    CHECK(c.summary["nonconverged_points"] == "0");
    CHECK(num(c.rows.front()[1]) < 0.1);
    CHECK(num(c.rows.back()[2]) < 0.1);

    r = run({"fading-compare", "--scenario", dir + "fig1.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("alpha = 2n") != std::string::npos);
}

TEST_CASE("multiobs command") {
    auto r = run({"multiobs", "--scenario", dir + "fig5.json"});
    REQUIRE(r.code == 0);
    auto c = parse(r.out);
    CHECK(c.rows.size() == 16);
    CHECK(c.summary["best_rule"] == "0101");
    CHECK(c.summary["worst_rule"] == "1010");

    r = run({"multiobs", "--scenario", dir + "fig1.json", "--aloha", dir + "aloha_n2.json", "--history", "10"});
    REQUIRE(r.code == 0);
    c = parse(r.out);
    CHECK(c.rows.size() == 64);
    CHECK(c.summary["best_rule"] == "010101");
    CHECK(c.summary["worst_rule"] == "101010");
    CHECK(c.summary["K"] == "1");

    const std::string big = write_temp("aloha9.json", R"({"p": 0.5, "N": 9})");
    r = run({"multiobs", "--scenario", dir + "fig1.json", "--aloha", big});
    CHECK(r.code == 2);
    CHECK(r.err.find("N <= 8") != std::string::npos);

    const std::string noisy = write_temp("noisy2.json", R"({"n": 2, "lambda": 2e-4, "alpha": 3, "beta": 5, "r_T": 10, "eta": 1e-5})");
    CHECK(run({"multiobs", "--scenario", noisy, "--aloha", dir + "aloha_n1.json"}).code == 2);
    CHECK(run({"multiobs", "--scenario", dir + "fig1.json"}).code == 2);
    CHECK(run({"multiobs", "--scenario", dir + "fig5.json", "--history", "11"}).code == 2);
}

TEST_CASE("validate command") {
    const std::vector<std::string> args{"validate", "--scenario", dir + "fig1.json", "--trials", "20000", "--seed", "5"};
    const auto a = run(args);
    CHECK(a.code == 0);
    const auto c = parse(a.out);
    CHECK(c.summary.at("failed") == "0");
    CHECK(c.rows.size() == 1 + 4 * 6);
    CHECK(run(args).out == a.out);

    auto bad = args;
    bad.insert(bad.end(), {"--corrupt-beta", "1.5"});
    const auto b = run(bad);
    CHECK(b.code == 1);
    bool rho_failed = false;
    for (const auto& row : parse(b.out).rows) rho_failed |= row[0] == "rho" && row.back() == "fail";
    CHECK(rho_failed);

    const auto m = run({"validate", "--scenario", dir + "fig1.json", "--aloha", dir + "aloha_n1.json", "--r-O", "50",
                        "--trials", "20000"});
    CHECK(m.code == 0);
    CHECK(parse(m.out).rows.size() == 1 + 2 * 5 + 2);

    CHECK(run({"validate", "--scenario", dir + "fig1.json", "--trials", "10"}).code == 2);
}

TEST_CASE("output file and manifest") {
    const std::string out = temp_path("roc.csv");
    std::filesystem::remove(out);
    std::filesystem::remove(out + ".manifest.json");
    const auto r = run({"roc", "--scenario", dir + "fig3.json", "--grid", "10,20,30", "--out", out, "--seed", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    std::stringstream body;
    body << f.rdbuf();
    const auto c = parse(body.str());
    CHECK(c.rows.size() == 3);
    std::ifstream mf(out + ".manifest.json");
    REQUIRE(mf);
    const auto m = nlohmann::json::parse(mf);
    for (const char* k : {"scenario", "command", "output", "seed", "timestamp", "library_version", "config_hash"})
        CHECK(m.contains(k));
    CHECK(m["command"] == "roc");
    CHECK(m["seed"] == 4);
    CHECK(body.str().find(m["config_hash"].get<std::string>()) != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"roc"}).code == 2);
    CHECK(run({"roc", "--scenario", "/does/not/exist.json"}).code == 2);
    CHECK(run({"roc", "--scenario", dir + "fig1.json", "--grid", "log:0:1:3"}).code == 2);
    CHECK(run({"roc", "--scenario", dir + "fig1.json", "--format", "xml"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}
