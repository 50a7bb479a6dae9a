#include <catch2/catch_amalgamated.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>

#include "fixtures.hpp"
#include "matpoly/io.hpp"
#include "matpoly/matpoly.hpp"

using namespace matpoly;
using matpoly::io::Json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MATPOLY_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("polynomial files parse") {
    const auto p = io::load_polynomial(fixtures::fixture_path("example4.json"));
    CHECK(p.rows() == 2);
    CHECK(p.degree() == 2);
    CHECK(fixtures::entry_gap(p.coeff(2), fixtures::fixture4().coeff(2)) == 0.0);
}

TEST_CASE("constant polynomial files are accepted") {
    const auto path = write_temp(
        "matpoly_k0.json",
        R"({"n":2,"m":2,"k":0,"coefficients":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})");
    const auto p = io::load_polynomial(path);
    CHECK(p.degree() == 0);
    CHECK(regularity(p).regular);

    // Downstream commands treat a regular constant as spectrum-free.
    CHECK(run_cli("analyze " + path).exit_code == 0);
    const auto r = run_cli("solvents " + path + " --format json");
    CHECK(r.exit_code == 0);
    CHECK(Json::parse(r.output).at("solvents").at("count") == 0);
}

TEST_CASE("parse failures carry diagnostics") {
    const auto truncated = write_temp("matpoly_trunc.json", R"({"n":2,"m":2,"k":1,)");
    CHECK_THROWS_AS(io::load_polynomial(truncated), ParseError);

    const auto missing = write_temp("matpoly_missing.json", R"({"n":2,"m":2,"k":1})");
    CHECK_THROWS_AS(io::load_polynomial(missing), ParseError);

    const auto wrong_shape = write_temp(
        "matpoly_shape.json",
        R"({"n":2,"m":2,"k":0,"coefficients":[[[[1,0]],[[0,0]]]]})");
    CHECK_THROWS_AS(io::load_polynomial(wrong_shape), DimensionMismatch);
}

TEST_CASE("polynomial JSON round trip") {
    const auto p = fixtures::fixture6();
    const auto back = io::parse_polynomial(io::polynomial_to_json(p));
    REQUIRE(back.degree() == p.degree());
    for (int i = 0; i <= p.degree(); ++i)
        CHECK(fixtures::entry_gap(back.coeff(i), p.coeff(i)) == 0.0);
}

TEST_CASE("cli analyze") {
    const auto r = run_cli("analyze " + fixtures::fixture_path("example6.json") + " --format json");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.output);
    CHECK(report.at("schema_version") == "1");
    CHECK(report.at("regularity").at("det_degree") == 3);
    CHECK(report.at("regularity").at("infinite_multiplicity_total") == 3);
    const auto& finite = report.at("weierstrass").at("finite");
    REQUIRE(finite.size() == 3);
    CHECK(std::abs(finite[0].at("eigenvalue")[0].get<double>() - 3.0) < 1e-7);
    CHECK(report.at("weierstrass").at("infinite_partial_multiplicities") ==
          Json::array({3}));
}

TEST_CASE("cli solvents output matches the known answer") {
    const auto r =
        run_cli("solvents " + fixtures::fixture_path("example4.json") + " --format json");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.output);
    const auto& items = report.at("solvents").at("items");
    REQUIRE(items.size() == 1);
    const auto expected = fixtures::fixture4_solvent();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(items[0].at("matrix")[i][j][0].get<double>() -
                           expected(i, j).real()) < 1e-8);
}

TEST_CASE("cli bisolvents reports idempotent alternatives") {
    const auto r =
        run_cli("bisolvents " + fixtures::fixture_path("example5.json") + " --format json");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.output);
    const auto& items = report.at("bisolvents").at("items");
    REQUIRE(items.size() == 1);
    CHECK(items[0].at("idempotents").size() == 2);
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("analyze /tmp/matpoly_no_such_file.json").exit_code == 1);

    const auto singular = write_temp(
        "matpoly_singular.json",
        R"({"n":2,"m":2,"k":1,"coefficients":[[[[0,0],[0,0]],[[0,0],[0,0]]],[[[1,0],[0,0]],[[0,0],[0,0]]]]})");
    CHECK(run_cli("analyze " + singular).exit_code == 2);
    CHECK(run_cli("solvents " + singular).exit_code == 2);
}

TEST_CASE("cli reports are byte-identical across runs") {
    const std::string args =
        "bisolvents " + fixtures::fixture_path("example6.json") + " --format json";
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    REQUIRE(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(Json::parse(first.output).at("bisolvents").at("count") == 2);
}

TEST_CASE("cli verify on companion files") {
    // A correct solvent companion.
    const auto good = write_temp(
        "matpoly_solvent.json",
        R"({"kind":"solvent","S":[[[2.5714285714285716,0],[-0.5714285714285714,0]],[[4.571428571428571,0],[-2.5714285714285716,0]]]})");
    const auto r =
        run_cli("verify " + fixtures::fixture_path("example4.json") + " " + good + " --format json");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.output);
    CHECK(report.at("verify").at("pass") == true);

    // Pair companion: the published pair of the same fixture.
    const auto pair = write_temp(
        "matpoly_pair.json",
        R"({"kind":"pair",
            "X":[[[1,0],[1,0]],[[1,0],[8,0]]],
            "T":[[[2,0],[0,0]],[[0,0],[-2,0]]],
            "Y":[[[1,0],[1,0]],[[1,0],[2,0]]],
            "Z":[[[0,0],[1,0]],[[0,0],[0,0]]]})");
    const auto rp =
        run_cli("verify " + fixtures::fixture_path("example4.json") + " " + pair + " --format json");
    REQUIRE(rp.exit_code == 0);
    CHECK(Json::parse(rp.output).at("verify").at("pass") == true);

    // A wrong solvent fails but still exits 0 (the check ran).
    const auto bad = write_temp(
        "matpoly_bad_solvent.json",
        R"({"kind":"solvent","S":[[[1,0],[0,0]],[[0,0],[1,0]]]})");
    const auto rb =
        run_cli("verify " + fixtures::fixture_path("example4.json") + " " + bad + " --format json");
    REQUIRE(rb.exit_code == 0);
    CHECK(Json::parse(rb.output).at("verify").at("pass") == false);
}

TEST_CASE("cli reconstructs a polynomial from a pair file") {
    const auto pair = write_temp(
        "matpoly_pair_rec.json",
        R"({"kind":"pair",
            "X":[[[1,0],[1,0]],[[1,0],[8,0]]],
            "T":[[[2,0],[0,0]],[[0,0],[-2,0]]],
            "Y":[[[1,0],[1,0]],[[1,0],[2,0]]],
            "Z":[[[0,0],[1,0]],[[0,0],[0,0]]]})");
    const auto r = run_cli("reconstruct " + pair + " --format json");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.output);
    CHECK(report.at("polynomial").at("k") == 2);
    CHECK(report.at("regularity").at("det_degree") == 2);
}

TEST_CASE("every numeric in a JSON report is finite") {
    const auto r =
        run_cli("factor " + fixtures::fixture_path("example6.json") + " --format json");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.output);
    // nlohmann rejects NaN/Inf on parse only for literals; walk and check.
    std::function<void(const Json&)> walk = [&](const Json& node) {
        if (node.is_number_float()) CHECK(std::isfinite(node.get<double>()));
        if (node.is_structured())
            for (const auto& child : node) walk(child);
    };
    walk(report);
}

TEST_CASE("fixtures match their expected-output companions") {
    for (const std::string name : {"example3", "example4", "example5", "example6"}) {
        CAPTURE(name);
        const auto p = io::load_polynomial(fixtures::fixture_path(name + ".json"));
        std::ifstream in(fixtures::fixture_path(name + ".expected.json"));
        REQUIRE(in.good());
        const Json expected = Json::parse(in);

        const auto reg = regularity(p);
        CHECK(reg.M == expected.at("det_degree").get<int>());
        CHECK(reg.infinite_mult_total == expected.at("infinite_multiplicity_total").get<int>());

        const auto data = weierstrass_of_pair(maximal_standard_pair(p));
        const auto& eigs = expected.at("finite_eigenvalues");
        REQUIRE(data.finite.size() == eigs.size());
        for (size_t i = 0; i < eigs.size(); ++i)
            CHECK(std::abs(data.finite[i].value - io::complex_from_json(eigs[i], "eig")) < 1e-7);
        CHECK(data.infinite ==
              expected.at("infinite_partial_multiplicities").get<std::vector<int>>());

        const auto sol = solvents(p);
        const auto& want_sol = expected.at("solvents");
        REQUIRE(sol.items.size() == want_sol.size());
        for (size_t i = 0; i < want_sol.size(); ++i)
            CHECK(fixtures::entry_gap(sol.items[i].matrix,
                                      io::matrix_from_json(want_sol[i], "solvent")) < 1e-7);

        const auto cos = cosolvents(p);
        const auto& want_cos = expected.at("cosolvents");
        REQUIRE(cos.items.size() == want_cos.size());
        std::vector<int> nil;
        for (size_t i = 0; i < want_cos.size(); ++i) {
            CHECK(fixtures::entry_gap(cos.items[i].matrix,
                                      io::matrix_from_json(want_cos[i], "cosolvent")) < 1e-7);
            if (cos.items[i].nilpotent) nil.push_back(static_cast<int>(i));
        }
        CHECK(nil == expected.at("nilpotent_cosolvents").get<std::vector<int>>());

        const auto bis = bisolvents(p);
        const auto& want_bis = expected.at("bisolvents");
        REQUIRE(bis.items.size() == want_bis.size());
        for (size_t i = 0; i < want_bis.size(); ++i) {
            CHECK(fixtures::entry_gap(bis.items[i].S1,
                                      io::matrix_from_json(want_bis[i].at("S1"), "S1")) < 1e-7);
            CHECK(fixtures::entry_gap(bis.items[i].S2,
                                      io::matrix_from_json(want_bis[i].at("S2"), "S2")) < 1e-7);
            if (want_bis[i].contains("idempotents")) {
                const auto& want_pis = want_bis[i].at("idempotents");
                REQUIRE(bis.items[i].idempotents.size() == want_pis.size());
                for (size_t t = 0; t < want_pis.size(); ++t)
                    CHECK(fixtures::entry_gap(bis.items[i].idempotents[t],
                                              io::matrix_from_json(want_pis[t], "Pi")) < 1e-7);
            }
        }

        CHECK(factor_atlas(p).size() ==
              expected.at("factorization_count").get<size_t>());
    }
}

TEST_CASE("pair inversion through the cli") {
    const auto r = run_cli("pair " + fixtures::fixture_path("example4.json") +
                           " --invert 2,-2 --format json");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.output);
    CHECK(report.at("pair").at("p") == 0);
    CHECK(report.at("pair").at("q") == 4);
    CHECK(report.at("pair").at("rank_ok") == true);
}
