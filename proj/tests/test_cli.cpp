// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult ncq(const std::string &args) {
    std::string cmd = std::string(NCQ_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    std::FILE *p = popen(cmd.c_str(), "r");
    if (p == nullptr) return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("ncq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::string file(const std::string &name) const { return (dir_ / name).string(); }
    std::filesystem::path dir_;
};

}  // namespace

TEST_F(Cli, CertifyExitCodes) {
    ASSERT_EQ(ncq("export measurement planar4 -o " + file("p4.json")).code, 0);
    ASSERT_EQ(ncq("export measurement trivial2 -o " + file("t.json")).code, 0);
    EXPECT_EQ(ncq("certify " + file("p4.json")).code, 10);
    EXPECT_EQ(ncq("certify " + file("t.json")).code, 0);
    EXPECT_EQ(ncq("certify --builtin bb84").code, 10);

    std::ofstream(file("bad.json")) << "{\"schema\": 1, \"type\": \"measurement\", \"dim\": ";
    EXPECT_EQ(ncq("certify " + file("bad.json")).code, 2);
    EXPECT_EQ(ncq("certify " + file("missing.json")).code, 2);
    EXPECT_EQ(ncq("certify --builtin nosuchthing").code, 2);
    EXPECT_EQ(ncq("certify").code, 2);
}

TEST_F(Cli, EnumerationCapAndSolverFailure) {
    EXPECT_EQ(ncq("robustness --builtin dodecahedron --max-candidates 1").code, 4);
    EXPECT_EQ(ncq("robustness --builtin planar6 --max-iters 1").code, 3);
}

TEST_F(Cli, RobustnessAndFraction) {
    CliResult r = ncq("robustness --kind states --builtin icosahedron12");
    EXPECT_EQ(r.code, 10);
    EXPECT_NE(r.out.find("0.4194"), std::string::npos) << r.out;

    CliResult j = ncq("fraction --builtin planar5 --format json");
    EXPECT_EQ(j.code, 10);
    EXPECT_NE(j.out.find("\"quantity\": \"omega\""), std::string::npos) << j.out;
    EXPECT_NE(j.out.find("\"verdict\": \"nonclassical\""), std::string::npos) << j.out;
}

TEST_F(Cli, ScenarioLp) {
    ASSERT_EQ(ncq("export scenario pentagon -o " + file("pent.json")).code, 0);
    CliResult r = ncq("lp-model " + file("pent.json") + " --format json");
    EXPECT_EQ(r.code, 10);
    EXPECT_NE(r.out.find("\"feasible\": false"), std::string::npos) << r.out;
    EXPECT_EQ(ncq("lp-model --builtin pentagon_rotated --eta 0.61").code, 0);
}

TEST_F(Cli, Steering) {
    EXPECT_EQ(ncq("steer --builtin isotropic --eta 0.45 --measurements icosahedron_steering").code, 10);
    EXPECT_EQ(ncq("steer --builtin isotropic --eta 0.41 --measurements icosahedron_steering").code, 0);
}

TEST_F(Cli, ReproduceTable) { EXPECT_EQ(ncq("reproduce table1").code, 0); }

TEST_F(Cli, JsonOutputIsByteIdentical) {
    CliResult a = ncq("robustness --builtin mub2 --format json");
    CliResult b = ncq("robustness --builtin mub2 --format json");
    EXPECT_EQ(a.code, 10);
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out);
    CliResult c = ncq("robustness --builtin mub2 --format json --jobs 4");
    EXPECT_EQ(a.out, c.out);
}

TEST_F(Cli, ProgramDumpAndSolve) {
    ASSERT_EQ(ncq("program --builtin planar5 --quantity eta -o " + file("prog.json")).code, 0);
    CliResult r = ncq("solve " + file("prog.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.61803"), std::string::npos) << r.out;
}

TEST_F(Cli, EnvironmentDefaults) {
    CliResult r = ncq("robustness --builtin planar6");
    EXPECT_EQ(r.code, 10);
    std::string cmd = "NCQ_MAX_ITERS=1 " + std::string(NCQ_CLI_PATH) + " robustness --builtin planar6 >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    EXPECT_EQ(WEXITSTATUS(status), 3);
    cmd = "NCQ_MAX_ITERS=1 " + std::string(NCQ_CLI_PATH) + " robustness --builtin planar6 --max-iters 200 >/dev/null 2>&1";
    status = std::system(cmd.c_str());
    EXPECT_EQ(WEXITSTATUS(status), 10);
}
