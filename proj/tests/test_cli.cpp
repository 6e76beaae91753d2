/**
 * @file test_cli.cpp
 * @brief Subcommands, exit codes, output formats and atomic writes of the
 *        command-line front end.
 */

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "sixcyl/cli.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct result {
    int code;
    std::string out;
    std::string err;
};

result run(std::vector<std::string> args) {
    args.insert(args.begin(), "sixcyl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = sixcyl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

class CliFiles : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("sixcyl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

std::vector<double> row_values(const std::string& line) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    return v;
}

TEST_F(CliFiles, CertifyRecordPoint) {
    const fs::path out = dir_ / "cert.json";
    const result r = run({"certify", "--x", "1/2", "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(out);
    const json j = json::parse(text);
    EXPECT_EQ(j["verdict"], "CERTIFIED_SHARP_MAX");
    EXPECT_EQ(j["rank"], 11);
    EXPECT_EQ(j["e_dim"], 4);
    EXPECT_EQ(j["tool_version"], "0.1.0");
    ASSERT_EQ(j["lambda"].size(), 12u);
    EXPECT_EQ(j["lambda"][0]["pair"], "AB");
    EXPECT_NEAR(j["lambda"][6]["scaled_to_10"].get<double>(), 23.0 + 3.0 * std::sqrt(5.0), 1e-7);
    EXPECT_NEAR(j["lambda"][11]["scaled_to_10"].get<double>(), 23.0 - 3.0 * std::sqrt(5.0), 1e-7);
    for (const auto& e : j["eigenvalues"]) EXPECT_LT(e.get<double>(), 0.0);
    // Fixed key order.
    std::size_t last = 0;
    for (const char* k : {"\"verdict\"", "\"rank\"", "\"singular_values\"", "\"lambda\"", "\"e_dim\"",
                          "\"restricted_form\"", "\"eigenvalues\"", "\"margins\"", "\"tool_version\"", "\"seed\""}) {
        const std::size_t pos = text.find(k);
        ASSERT_NE(pos, std::string::npos) << k;
        EXPECT_GT(pos, last) << k;
        last = pos;
    }
    EXPECT_FALSE(fs::exists(dir_ / "cert.json.tmp"));
}

TEST(Cli, ToyReportsNegativeVerdict) {
    const result r = run({"toy"});
    EXPECT_EQ(r.code, 2);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "FAILED_B");
    ASSERT_EQ(j["eigenvalues"].size(), 1u);
    EXPECT_NEAR(j["eigenvalues"][0].get<double>(), 4.0, 1e-6);
    EXPECT_TRUE(j["margins"]["sv_gap"].is_null());
}

TEST(Cli, CertifyOffRecordIsNegative) {
    const result r = run({"certify", "--x", "2/5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.out)["verdict"], "FAILED_A");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"certify", "--x", "0.4"}).code, 1);
    EXPECT_EQ(run({"certify", "--x", "3/2"}).code, 1);
    EXPECT_EQ(run({"certify", "--x", "1"}).code, 1);
    EXPECT_EQ(run({"scan", "--from", "0"}).code, 1);
    EXPECT_EQ(run({"perturb", "--t", "1e-2,abc"}).code, 1);
    EXPECT_EQ(run({"galois", "--x", "1/2", "--order", "5"}).code, 1);
    const result r = run({"scan", "--out", ""});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("empty output path"), std::string::npos);
}

TEST(Cli, VersionFlag) {
    const result r = run({"--version"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}

TEST_F(CliFiles, ScanTable) {
    const fs::path out = dir_ / "curve.csv";
    const result r = run({"scan", "--from", "0.01", "--to", "1.0", "--steps", "100", "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(out);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    const auto lines = split_lines(text);
    ASSERT_EQ(lines.size(), 102u);
    EXPECT_EQ(lines[0], "x,phi,delta,kappa,d2_common,d2_AE_class,psi_residual");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto v = row_values(lines[i]);
        ASSERT_EQ(v.size(), 7u);
        EXPECT_LT(std::abs(v[6]), 1e-12) << lines[i];
    }
    const auto last = row_values(lines.back());
    EXPECT_EQ(last[0], 1.0);
    EXPECT_EQ(last[1], 0.0);
    EXPECT_EQ(last[2], 0.0);
    EXPECT_EQ(last[3], 0.0);
    EXPECT_NEAR(last[4], 1.0, 1e-12);
}

TEST(Cli, ScanAtRecordPoint) {
    const result r = run({"scan", "--from", "0.5", "--to", "0.5", "--steps", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 2u);
    const auto v = row_values(lines[1]);
    EXPECT_NEAR(v[4], 12.0 / 11.0, 1e-12);
    // 17 significant digits: the correctly rounded double nearest 12/11.
    EXPECT_NE(lines[1].find(",1.0909090909090908,"), std::string::npos) << lines[1];
}

TEST_F(CliFiles, PerturbIsDeterministic) {
    const fs::path a = dir_ / "a.json", b = dir_ / "b.json";
    ASSERT_EQ(run({"perturb", "--samples", "200", "--seed", "3", "--out", a.string()}).code, 0);
    ASSERT_EQ(run({"perturb", "--samples", "200", "--seed", "3", "--out", b.string()}).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    const json j = json::parse(slurp(a));
    EXPECT_EQ(j["violations"], 0);
    EXPECT_EQ(j["seed"], 3);
    EXPECT_EQ(j["samples"], 200);
}

TEST_F(CliFiles, OutputIsReplacedAtomically) {
    const fs::path out = dir_ / "toy.json";
    {
        std::ofstream f(out);
        f << "stale";
    }
    EXPECT_EQ(run({"toy", "--out", out.string()}).code, 2);
    EXPECT_EQ(json::parse(slurp(out))["verdict"], "FAILED_B");
    EXPECT_FALSE(fs::exists(dir_ / "toy.json.tmp"));
}

TEST(Cli, UnwritablePathIsAnError) {
    const result r = run({"toy", "--out", "/nonexistent-dir/x/toy.json"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, GaloisReports) {
    const result half = run({"galois", "--x", "1/2"});
    ASSERT_EQ(half.code, 0) << half.err;
    const json j = json::parse(half.out);
    EXPECT_EQ(j["field"], "Q[sqrt(5)]");
    EXPECT_EQ(j["coefficients"][1]["exact"]["a"], "-240/121");
    EXPECT_EQ(j["coefficients"][1]["exact"]["b"], "-60/121");
    EXPECT_TRUE(j["swap_holds"].get<bool>());

    const result fifth = run({"galois", "--x", "1/5"});
    EXPECT_EQ(fifth.code, 2);
    const json k = json::parse(fifth.out);
    EXPECT_EQ(k["field"], "Q");
    EXPECT_EQ(k["note"], "p_x rational");
}

} // namespace
