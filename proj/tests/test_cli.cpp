#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(KRS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST_CASE("polytope report for a built-in example") {
    auto r = run("polytope --example cp1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"volume\": \"2\"") != std::string::npos);
    CHECK(r.out.find("\"barycenter\"") != std::string::npos);
}

TEST_CASE("polytope lattice dump in csv") {
    auto r = run("polytope --example cp1 --format csv --m-max 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("m,u1\n", 0) == 0);
    CHECK(r.out.find("2,-2\n") != std::string::npos);
}

TEST_CASE("polytope from a JSON facet description") {
    auto p = write_temp("krs_cli_interval.json",
                        "{\"dim\":1,\"facets\":[{\"normal\":[1],\"offset\":\"-1\"},"
                        "{\"normal\":[-1],\"offset\":\"-2\"}]}");
    auto r = run("polytope --input " + p.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"volume\": \"3\"") != std::string::npos);
    CHECK(r.out.find("\"1/2\"") != std::string::npos);
}

TEST_CASE("character counts and csv") {
    auto r = run("character --example cp2 --m-max 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"total\": 28") != std::string::npos);
    auto c = run("character --example cp1 --m-max 1 --format csv");
    CHECK(c.exit_code == 0);
    CHECK(c.out == "u1,mult\n-1,1\n0,1\n1,1\n");
}

TEST_CASE("convergence study emits slope columns") {
    auto r = run("df --example cp1 --xi 1 --lambda 1 --m-max 40 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("m,df_disc,df_cont,gap,slope_so_far\n", 0) == 0);
    // first row has no slope yet, later rows do
    auto first_newline = r.out.find('\n');
    auto row1_end = r.out.find('\n', first_newline + 1);
    std::string row1 = r.out.substr(first_newline + 1, row1_end - first_newline - 1);
    CHECK(row1.back() == ',');
    CHECK(r.out.find("-1.00") != std::string::npos);
}

TEST_CASE("soliton vector subcommand") {
    auto r = run("xi --example bl1cp2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("-0.52761951") != std::string::npos);
    CHECK(r.out.find("\"kahler_einstein\": false") != std::string::npos);
    auto s = run("xi --example p1xp1");
    CHECK(s.out.find("\"kahler_einstein\": true") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
    for (const char* cmd : {"xi --example bl1cp2", "verify-appendixb --seeds 5",
                            "verify-momentmap", "df --example cp2 --xi 0.5,0.25 --lambda 1,0"}) {
        auto a = run(cmd), b = run(cmd);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("verification subcommands pass and flag injected faults") {
    auto ab = run("verify-appendixb --seeds 10");
    CHECK(ab.exit_code == 0);
    CHECK(ab.out.find("\"pass\": true") != std::string::npos);
    CHECK(run("verify-appendixb --seeds 5 --inject-fault").exit_code == 1);
    auto vm = run("verify-momentmap");
    CHECK(vm.exit_code == 0);
    CHECK(run("verify-momentmap --inject-fault").exit_code == 1);
}

TEST_CASE("stability sandbox subcommand") {
    auto good = write_temp("krs_cli_rep.json",
                           "{\"k\":1,\"weights\":[[1],[-1]],\"point\":[[2,0],[1,0]]}");
    auto r = run("git --input " + good.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"verdict\": \"polystable\"") != std::string::npos);
    CHECK(r.out.find("zero_moment_residual") != std::string::npos);

    auto bad = write_temp("krs_cli_rep_unstable.json",
                          "{\"k\":1,\"weights\":[[1],[-1]],\"point\":[[1,0],[0,0]]}");
    auto u = run("git --input " + bad.string());
    CHECK(u.exit_code == 0);
    CHECK(u.out.find("\"verdict\": \"unstable\"") != std::string::npos);
    CHECK(run("git --input " + bad.string() + " --assert-polystable").exit_code == 1);
}

TEST_CASE("output goes to the requested file") {
    auto p = std::filesystem::temp_directory_path() / "krs_cli_out.json";
    std::filesystem::remove(p);
    auto r = run("polytope --example cp2 --output " + p.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream is(p);
    std::string content((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
    CHECK(content.find("\"volume\": \"9/2\"") != std::string::npos);
}

TEST_CASE("usage and input errors exit with code 2") {
    CHECK(run("").exit_code == 2);
    CHECK(run("polytope").exit_code == 2);  // no source given
    CHECK(run("polytope --example nosuch").exit_code == 2);
    CHECK(run("polytope --bogus-flag").exit_code == 2);
    CHECK(run("df --example cp1 --xi 1,2 --lambda 1").exit_code == 2);
    CHECK(run("xi --example cp1 --example cp2").exit_code == 2);
    auto p = write_temp("krs_cli_bad.json", "this is not json");
    CHECK(run("polytope --input " + p.string()).exit_code == 2);
    auto q = write_temp("krs_cli_badshape.json", "{\"dim\":2,\"rays\":[[1]]}");
    CHECK(run("polytope --input " + q.string()).exit_code == 2);
}
