#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tlsub/cli_report.hpp"

using namespace tlsub;
using namespace tlsub::cli;

namespace {

std::string temp_file(const std::string &name, const std::string &content) {
    const auto path = std::filesystem::temp_directory_path() / ("tlsub_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const CheckResult *find_check(const Report &r, const std::string &name) {
    for (const auto &c : r.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

} // namespace

TEST(ParseComplex, Forms) {
    EXPECT_EQ(parse_complex("1"), Complex(1, 0));
    EXPECT_EQ(parse_complex("-1"), Complex(-1, 0));
    EXPECT_EQ(parse_complex("2.5i"), Complex(0, 2.5));
    EXPECT_EQ(parse_complex("i"), Complex(0, 1));
    EXPECT_EQ(parse_complex("-i"), Complex(0, -1));
    EXPECT_EQ(parse_complex("1+2i"), Complex(1, 2));
    EXPECT_EQ(parse_complex("1-i"), Complex(1, -1));
    EXPECT_EQ(parse_complex(" -0.5 + 0.25i "), Complex(-0.5, 0.25));
    EXPECT_EQ(parse_complex("1e-3-2e+1i"), Complex(1e-3, -20));
    EXPECT_EQ(parse_complex("-1.5e2i"), Complex(0, -150));
    for (const char *bad : {"", "abc", "1+", "1..2", "2ii", "1+2j"})
        EXPECT_THROW(parse_complex(bad), UsageError) << bad;
}

TEST(ParseInput, Examples) {
    const RunConfig a = parse_input({"verify", "--coeffs", "1,-1", "--levels", "6"});
    EXPECT_EQ(a.command, Command::Verify);
    ASSERT_TRUE(a.coeffs);
    EXPECT_EQ(a.coeffs->size(), 2u);
    EXPECT_EQ(*a.levels, 6);
    EXPECT_EQ(a.tol, 1e-9);

    const RunConfig b = parse_input({"verify", "--coeffs", "1,1,1", "--levels", "5", "--tol", "1e-10"});
    EXPECT_EQ(b.coeffs->size(), 3u);
    EXPECT_EQ(b.tol, 1e-10);

    const RunConfig c = parse_input({"dims", "--m", "3", "--n", "8"});
    EXPECT_EQ(c.command, Command::Dims);
    EXPECT_EQ(*c.m, 3);
    EXPECT_EQ(*c.n, 8);

    const RunConfig k = parse_input({"ktheory", "--truncate", "10"});
    EXPECT_EQ(*k.truncate, 10);
}

TEST(ParseInput, UsageErrorsNameTheFlag) {
    auto message = [](const std::vector<std::string> &args) {
        try {
            parse_input(args);
        } catch (const UsageError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message({"verify", "--coeffs", "1,-1", "--levels", "banana"}).find("--levels"), std::string::npos);
    EXPECT_NE(message({"verify", "--coeffs", "1,x"}).find("--coeffs"), std::string::npos);
    EXPECT_NE(message({"verify", "--coeffs", "1,-1", "--tol", "-1"}).find("--tol"), std::string::npos);
    EXPECT_NE(message({"verify", "--coeffs", "1,-1", "--levels", "0"}).find("--levels"), std::string::npos);
    EXPECT_NE(message({"verify"}).find("--coeffs"), std::string::npos);
    EXPECT_NE(message({"dims"}).find("--m"), std::string::npos);
    EXPECT_NE(message({"frobnicate"}), "no error");
    EXPECT_NE(message({}), "no error");
    const std::string m = temp_file("a.json", "[[[1,0],[0,0]]]");
    EXPECT_NE(message({"check", "--coeffs", "1,-1", "--matrix", m}).find("exclusive"), std::string::npos);
}

TEST(ParseInput, MatrixFiles) {
    const std::string good = temp_file("good.json", "[[[0,0],[-1,0]],[[1,0],[0,0]]]");
    const RunConfig cfg = parse_input({"check", "--matrix", good});
    ASSERT_TRUE(cfg.matrix);
    EXPECT_EQ((*cfg.matrix)(0, 1), Complex(-1, 0));
    EXPECT_EQ((*cfg.matrix)(1, 0), Complex(1, 0));

    const std::string nonsquare = temp_file("ns.json", "[[[0,0],[1,0],[2,0]],[[1,0],[0,0],[3,0]]]");
    EXPECT_THROW(parse_input({"check", "--matrix", nonsquare}), UsageError);
    const std::string ragged = temp_file("rag.json", "[[[0,0],[1,0]],[[1,0]]]");
    EXPECT_THROW(parse_input({"check", "--matrix", ragged}), UsageError);
    const std::string scalar = temp_file("sc.json", "[[1,2],[3,4]]");
    EXPECT_THROW(parse_input({"check", "--matrix", scalar}), UsageError);
    const std::string broken = temp_file("br.json", "[[[0,0]");
    EXPECT_THROW(parse_input({"check", "--matrix", broken}), UsageError);
    EXPECT_THROW(parse_input({"check", "--matrix", "/nonexistent/x.json"}), UsageError);
}

TEST(RunSuite, VerifySU2) {
    const Report r = run_suite(parse_input({"verify", "--coeffs", "1,-1", "--levels", "6", "--tol", "1e-10"}));
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(exit_code(r), 0);
    for (const char *name : {"relation_gauge_shift", "relation_row_sum", "relation_polynomial",
                             "relation_quadratic", "tail_level_gap", "tail_intertwining"}) {
        const CheckResult *c = find_check(r, name);
        ASSERT_NE(c, nullptr) << name;
        EXPECT_LT(c->value, 1e-10);
    }
    EXPECT_EQ(r.params["m"], 2);
    EXPECT_EQ(r.params["tau"], 1);
}

TEST(RunSuite, ChecksAppearOnce) {
    const Report r = run_suite(parse_input({"verify", "--coeffs", "1,1,1", "--levels", "4"}));
    std::set<std::string> names;
    for (const auto &c : r.checks)
        EXPECT_TRUE(names.insert(c.name).second) << c.name;
}

TEST(RunSuite, KTheory) {
    const Report r = run_suite(parse_input({"ktheory", "--truncate", "10"}));
    EXPECT_TRUE(r.passed());
    for (const auto &d : r.data["determinants"])
        EXPECT_EQ(std::abs(d.get<long long>()), 1);
    EXPECT_EQ(r.data["k0"]["2"], "Z");
    EXPECT_EQ(r.data["k0"]["3"], "0");
    EXPECT_EQ(r.data["k0"]["4"], "Z/2");
    const Report r4 = run_suite(parse_input({"ktheory", "--truncate", "4", "--m", "4"}));
    EXPECT_EQ(r4.data["k0"]["4"], "Z/2");
}

TEST(RunSuite, Dims) {
    const Report r = run_suite(parse_input({"dims", "--m", "3", "--n", "8"}));
    EXPECT_EQ(r.data["dims"], nlohmann::ordered_json({1, 3, 8, 21, 55, 144, 377, 987, 2584}));
    EXPECT_TRUE(r.passed());
}

TEST(RunSuite, CheckAndNormalForm) {
    const Report c = run_suite(parse_input({"check", "--coeffs", "1,-1"}));
    EXPECT_TRUE(c.passed());
    EXPECT_NEAR(c.data["lambda"].get<double>(), 4.0, 1e-12);

    const std::string m = temp_file("nf.json", "[[[0,0],[0,0],[1,0]],[[0,0],[2,0],[0,0]],[[4,0],[0,0],[0,0]]]");
    const Report n = run_suite(parse_input({"normal-form", "--matrix", m}));
    EXPECT_TRUE(n.passed());
    EXPECT_EQ(n.data["coeffs"].size(), 3u);

    const std::string jordan = temp_file("jordan.json", "[[[1,0],[1,0]],[[0,0],[1,0]]]");
    const Report bad = run_suite(parse_input({"check", "--matrix", jordan}));
    EXPECT_FALSE(bad.passed());
    EXPECT_EQ(exit_code(bad), 2);
    ASSERT_EQ(bad.errors.size(), 1u);
    EXPECT_NE(bad.errors[0].find("NotTemperleyLieb"), std::string::npos);
}

TEST(RunSuite, MatrixInputDrivesTheSystem) {
    const std::string m = temp_file("su2.json", "[[[0,0],[-1,0]],[[1,0],[0,0]]]");
    const Report r = run_suite(parse_input({"jw", "--matrix", m, "--levels", "4"}));
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.data["dims"], nlohmann::ordered_json({1, 2, 3, 4, 5}));
}

TEST(RunSuite, JwAndBoundary) {
    const Report j = run_suite(parse_input({"jw", "--coeffs", "1,1,1", "--levels", "4"}));
    EXPECT_TRUE(j.passed());
    EXPECT_EQ(j.decay.size(), 3u);
    const Report b = run_suite(parse_input({"boundary", "--coeffs", "1,1,1", "--levels", "4"}));
    EXPECT_TRUE(b.passed());
    EXPECT_EQ(b.decay.size(), 3u);
}

TEST(RunSuite, TauUndefinedIsAFailure) {
    const Report r = run_suite(parse_input({"verify", "--coeffs", "1,i"}));
    EXPECT_EQ(exit_code(r), 2);
    EXPECT_NE(r.errors.at(0).find("TauUndefined"), std::string::npos);
}

TEST(RunSuite, BudgetFromEnvironment) {
    ::setenv("TLSUB_MAX_SCALARS", "1000", 1);
    const Report r = run_suite(parse_input({"jw", "--coeffs", "1,-1", "--levels", "6"}));
    EXPECT_EQ(exit_code(r), 3);
    ::setenv("TLSUB_MAX_SCALARS", "lots", 1);
    EXPECT_EQ(run({"jw", "--coeffs", "1,-1"}).code, 1);
    ::unsetenv("TLSUB_MAX_SCALARS");
    EXPECT_EQ(exit_code(run_suite(parse_input({"jw", "--coeffs", "1,-1", "--levels", "6"}))), 0);
}

TEST(Output, ByteStableAndFormatted) {
    const auto args = std::vector<std::string>{"verify", "--coeffs", "1,1,1", "--levels", "4"};
    const CliRun a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.find("timings"), std::string::npos);
    const auto parsed = nlohmann::json::parse(a.out);
    EXPECT_EQ(parsed["command"], "verify");
    EXPECT_TRUE(parsed["pass"].get<bool>());
    EXPECT_NEAR(parsed["params"]["q"].get<double>(), (3 - std::sqrt(5.0)) / 2, 1e-16);
    EXPECT_NE(a.out.find("0.38196601125010"), std::string::npos);
    const CliRun t = run({"verify", "--coeffs", "1,1,1", "--levels", "4", "--timings"});
    EXPECT_NE(t.out.find("timings_seconds"), std::string::npos);
}

TEST(Output, FormatDouble) {
    EXPECT_EQ(cli::detail::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(cli::detail::format_double(4.0), "4");
    EXPECT_EQ(cli::detail::format_double(std::nan("")), "null");
}

TEST(Output, FilesAndCsv) {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string out = (dir / "tlsub_test_report.json").string();
    const std::string csv = (dir / "tlsub_test_decay.csv").string();
    const CliRun r = run({"verify", "--coeffs", "1,1,1", "--levels", "4", "--out", out, "--csv", csv});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("pass"), std::string::npos);
    std::ifstream jf(out);
    const auto j = nlohmann::json::parse(jf);
    EXPECT_EQ(j["decay"]["rows"].size(), 4u);
    std::ifstream cf(csv);
    std::string header, line;
    std::getline(cf, header);
    EXPECT_EQ(header, "n,value,value/q^n");
    int rows = 0;
    while (std::getline(cf, line))
        ++rows;
    EXPECT_EQ(rows, 4);
}

TEST(Output, ExitCodes) {
    EXPECT_EQ(run({"dims", "--m", "3", "--n", "8"}).code, 0);
    EXPECT_EQ(run({"verify", "--coeffs", "1,-1", "--levels", "banana"}).code, 1);
    EXPECT_EQ(run({"verify", "--coeffs", "1,2"}).code, 2);
    EXPECT_EQ(run({"jw", "--coeffs", "1,-1", "--levels", "20"}).code, 3);
    EXPECT_EQ(run({"--help"}).code, 0);
}
