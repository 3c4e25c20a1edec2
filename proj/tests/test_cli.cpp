// End-to-end checks of the qdisp binary: exit-code contract, output
// schemas, and a few reproduction rows. The binary path arrives as the
// first command-line argument (wired up in CMake).

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_binary;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-qdisp-binary> [catch2 args]\n");
        return 2;
    }
    g_binary = argv[1];
    Catch::Session session;
    return session.run(argc - 1, argv + 1);
}

TEST_CASE("repro fock emits the closed-form ladder") {
    const RunResult r = run("repro fock --n-max 3 --dim 64");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][0]["q_closed"].get<double>() == 2.0);
    CHECK(j["rows"][1]["q_closed"].get<double>() == 6.0);
    CHECK(std::abs(j["rows"][1]["R"].get<double>() - 1.0 / 3.0) < 1e-7);
    CHECK(std::abs(j["rows"][3]["det_Q"].get<double>() - 14.0 * 14.0) < 1e-4);
    for (const auto& row : j["rows"]) CHECK(row["row_ok"].get<bool>());
}

TEST_CASE("repro vacuum-one hits the minimum at lambda = 1/4") {
    const RunResult r = run("repro vacuum-one --lambdas 0 0.25 0.5 --dim 32");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(std::abs(j["rows"][0]["q_formula"].get<double>() - 2.0) < 1e-12);
    CHECK(std::abs(j["rows"][1]["q_formula"].get<double>() - 1.5) < 1e-12);
    CHECK(std::abs(j["rows"][2]["q_formula"].get<double>() - 2.0) < 1e-12);
    CHECK(std::abs(j["rows"][2]["wigner_origin"].get<double>()) < 1e-12);
    CHECK_FALSE(j["rows"][1]["wigner_negative"].get<bool>());
    CHECK(j["meta"]["constants"]["quantum_non_gaussian_threshold"].get<double>() == 0.476);
}

TEST_CASE("repro photon-added-thermal stays Wigner negative") {
    const RunResult r = run("repro photon-added-thermal --lambdas 0.1 0.5 --dim 128");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    for (const auto& row : j["rows"]) CHECK(row["wigner_origin"].get<double>() < 0.0);
    CHECK(std::abs(j["rows"][1]["q_sld"].get<double>() - 1.070) < 5e-3);
}

TEST_CASE("purify reports the plan and a small residual") {
    const RunResult r = run("purify --sigma 2 0 2 --dim 64 --N 4");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(std::abs(j["meta"]["plan"]["lambda"].get<double>() - 3.0 / 8.0) < 1e-12);
    CHECK(j["meta"]["cm_residual"].get<double>() < 1e-10);
    CHECK(std::abs(j["meta"]["report"]["R"].get<double>() - 0.25) < 1e-6);
}

TEST_CASE("exit-code contract") {
    SECTION("invalid flags give 2") {
        CHECK(run("repro fock --no-such-flag").exit_code == 2);
        CHECK(run("repro vacuum-one --lambdas 2.0").exit_code == 2);
    }
    SECTION("unphysical sigma gives 3") {
        CHECK(run("purify --sigma 0.1 0 0.1 --dim 64").exit_code == 3);
    }
    SECTION("truncation failure gives 4") {
        CHECK(run("repro squeezed-mixture --r 2.0 --dim 32").exit_code == 4);
    }
}

TEST_CASE("analyze a spec file") {
    const std::string path = "cli_spec_tmp.json";
    {
        std::ofstream out(path);
        out << R"({"kind":"fock","params":{"n":3},"dim":64})";
    }
    const RunResult r = run("analyze " + path);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(std::abs(j["rows"][0]["q11"].get<double>() - 14.0) < 1e-6);
    CHECK(std::abs(j["meta"]["report"]["R"].get<double>() - 1.0 / 7.0) < 1e-6);
    std::remove(path.c_str());

    SECTION("parse failure gives 2") {
        const std::string bad = "cli_bad_tmp.json";
        {
            std::ofstream out(bad);
            out << "{not json";
        }
        CHECK(run("analyze " + bad).exit_code == 2);
        std::remove(bad.c_str());
    }
}

TEST_CASE("csv output round trip") {
    const RunResult r = run("repro fock --n-max 1 --dim 32 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.rfind("n,", 0) == 0);
    CHECK(r.output.find("\n0,") != std::string::npos);
}

TEST_CASE("validate quick passes and the bug fixture fails") {
    CHECK(run("validate --level quick --out /dev/null").exit_code == 0);
    CHECK(run("validate --level quick --inject-bug --out /dev/null").exit_code == 1);
}
