#include "schottky/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

using namespace schottky;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code = 0;
    std::string out, err;
};

Invocation run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Invocation r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string config(const std::string& name) { return std::string(SCHOTTKY_CONFIG_DIR) + "/" + name; }

fs::path scratch_dir()
{
    const fs::path p = fs::temp_directory_path() / "schottky_cli_test";
    fs::create_directories(p);
    return p;
}

std::string write_file(const std::string& name, const std::string& text)
{
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::size_t csv_rows(const std::string& csv)
{
    std::size_t n = 0;
    for (char c : csv)
        n += c == '\n';
    return n;
}

} // namespace

TEST(Grid, ParsesAxes)
{
    const cli::GridSpec g = cli::parse_grid("-2:2:3,0:1:1,-0.5:0.5:4");
    EXPECT_EQ(g.x0, -2.0);
    EXPECT_EQ(g.nx, 3);
    EXPECT_EQ(g.n2, 1);
    EXPECT_EQ(g.t31, 0.5);
    EXPECT_EQ(g.n3, 4);
    EXPECT_THROW(cli::parse_grid("0:1:2,0:1:2"), Error);
    EXPECT_THROW(cli::parse_grid("0:1:2.5,0:1:2,0:1:2"), Error);
    EXPECT_THROW(cli::parse_grid("0:x:2,0:1:2,0:1:2"), Error);
}

TEST(ExitCodes, Mapping)
{
    EXPECT_EQ(cli::exit_code_for(ErrorKind::InvalidInput), 1);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::CirclesOverlap), 2);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::InvalidParams), 2);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::TruncationNotConverged), 3);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::ThetaZero), 3);
}

TEST(Cli, NoSubcommandIsInputError)
{
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"bogus"}).code, 1);
    EXPECT_EQ(run({"periods"}).code, 1);
}

TEST(Cli, ValidateMcurve)
{
    const Invocation r = run({"validate", config("mcurve_g2.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out).at("valid").get<bool>());
}

TEST(Cli, ValidateOverlapping)
{
    const Invocation r = run({"validate", config("overlapping.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("error"), "CirclesOverlap");
}

TEST(Cli, ValidateMissingY)
{
    auto j = nlohmann::json::parse(std::ifstream(config("mcurve_g2.json")));
    j["params"].erase("y");
    EXPECT_EQ(run({"validate", write_file("noy.json", j.dump())}).code, 1);
    EXPECT_EQ(run({"validate", write_file("broken.json", "{\"graph\": ")}).code, 1);
    EXPECT_EQ(run({"validate", (scratch_dir() / "absent.json").string()}).code, 1);
}

TEST(Cli, PeriodsGenusOne)
{
    const Invocation r = run({"periods", config("mcurve_g1.json")});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["P"][0][0][0].get<double>(), 0.01, 1e-15);
    EXPECT_NEAR(j["P"][0][0][1].get<double>(), 0.0, 1e-15);
}

TEST(Cli, PeriodsGenusTwo)
{
    const Invocation r = run({"periods", config("mcurve_g2.json")});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["min_im_eig"].get<double>(), 0.0);
    EXPECT_EQ(j["Z"][0][1], j["Z"][1][0]);
}

TEST(Cli, ZeroWordLengthDoesNotConverge)
{
    EXPECT_EQ(run({"periods", config("mcurve_g2.json"), "--max-word-len", "0"}).code, 3);
}

TEST(Cli, KpCheck)
{
    const Invocation g1 = run({"kp-check", config("mcurve_g1.json"), "--tol", "1e-8"});
    EXPECT_EQ(g1.code, 0);
    EXPECT_EQ(g1.out.substr(0, g1.out.find('\n')), "x,t2,t3,re_u1,im_u1,residual");
    EXPECT_EQ(csv_rows(g1.out), 126u);
    EXPECT_EQ(run({"kp-check", config("mcurve_g2.json"), "--tol", "1e-6"}).code, 0);
    EXPECT_EQ(run({"kp-check", config("mcurve_g1.json"), "--tol", "1e-15"}).code, 4);
}

TEST(Cli, KpCheckCharacteristicAndJson)
{
    const Invocation r = run({"kp-check", config("mcurve_g2.json"), "--alpha", "0.1,0.2", "--beta", "0.3,0", "--format",
                              "json", "--grid", "-1:1:2,0:0:1,0:0:1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["points"].size(), 2u);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(run({"kp-check", config("mcurve_g2.json"), "--alpha", "0.1"}).code, 1);
}

TEST(Cli, BadFlags)
{
    EXPECT_EQ(run({"kp-check", config("mcurve_g1.json"), "--times", "17"}).code, 1);
    EXPECT_EQ(run({"kp-check", config("mcurve_g1.json"), "--format", "xml"}).code, 1);
    EXPECT_EQ(run({"kp-check", config("mcurve_g1.json"), "--tol", "-1"}).code, 1);
    EXPECT_EQ(run({"kp-check", config("mcurve_g1.json"), "--grid", "1:2"}).code, 1);
}

TEST(Cli, SolitonOne)
{
    const Invocation r = run({"soliton", config("soliton_one.json"), "--grid", "-4:4:9,0:0:1,0:0:1"});
    ASSERT_EQ(r.code, 0) << r.err;
    // u = d_x^2 log(1 + e^{kx + a}) is a single positive bump.
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::vector<double> u;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        for (int c = 0; c < 4; ++c)
            std::getline(row, cell, ',');
        u.push_back(std::stod(cell));
    }
    ASSERT_EQ(u.size(), 9u);
    int peaks = 0;
    for (std::size_t k = 1; k + 1 < u.size(); ++k)
        peaks += u[k] > u[k - 1] && u[k] > u[k + 1];
    EXPECT_LE(peaks, 1);
    for (double v : u)
        EXPECT_GT(v, 0.0);
}

TEST(Cli, SolitonTwoAndEmptyGrid)
{
    EXPECT_EQ(run({"soliton", config("soliton_two.json"), "--tol", "1e-9"}).code, 0);
    const Invocation e = run({"soliton", config("soliton_two.json"), "--grid", "0:1:0,0:1:3,0:1:3"});
    EXPECT_EQ(e.code, 0);
    EXPECT_EQ(csv_rows(e.out), 1u);
}

TEST(Cli, Laurent)
{
    const Invocation r = run({"laurent", config("mcurve_g2.json"), "--times", "4"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["q"].size(), 4u);
    EXPECT_LT(j["q_symmetry_defect"].get<double>(), 1e-7);
}

TEST(Cli, DegenerateScenarios)
{
    const Invocation half = run({"degenerate", config("degenerate_halfint.json")});
    EXPECT_EQ(half.code, 0) << half.err;
    EXPECT_TRUE(nlohmann::json::parse(half.out)["monotone"].get<bool>());
    EXPECT_EQ(run({"degenerate", config("degenerate_reducible.json")}).code, 0);
    // Generic branch: monotone, but the y^0.3 rate leaves 0.068 at y = 1e-4.
    const Invocation gen = run({"degenerate", config("degenerate_generic.json"), "--format", "csv"});
    EXPECT_EQ(gen.code, 4);
    EXPECT_EQ(csv_rows(gen.out), 4u);
    EXPECT_EQ(run({"degenerate", config("degenerate_generic.json"), "--tol", "0.1"}).code, 0);
}

TEST(Cli, Mcurve)
{
    const Invocation r = run({"mcurve", "-g", "2"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& x = j["params"]["x"];
    EXPECT_LT(x["-1"][0].get<double>(), x["1"][0].get<double>());
    EXPECT_LT(x["1"][0].get<double>(), x["-2"][0].get<double>());
    EXPECT_LT(x["-2"][0].get<double>(), x["2"][0].get<double>());
    EXPECT_EQ(run({"mcurve", "-g", "1"}).code, 0);
    EXPECT_EQ(run({"mcurve", "-g", "2", "--y", "0.9"}).code, 2);
}

TEST(Cli, OutFile)
{
    const std::string path = (scratch_dir() / "g1.json").string();
    const Invocation r = run({"mcurve", "-g", "1", "--out", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(run({"validate", path}).code, 0);
}

TEST(Cli, Deterministic)
{
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"periods", config("mcurve_g2.json")},
          std::vector<std::string>{"kp-check", config("mcurve_g2.json")},
          std::vector<std::string>{"soliton", config("soliton_two.json"), "--format", "json"},
          std::vector<std::string>{"laurent", config("mcurve_g1.json")},
          std::vector<std::string>{"degenerate", config("degenerate_reducible.json")}}) {
        const Invocation a = run(args);
        const Invocation b = run(args);
        EXPECT_EQ(a.out, b.out) << args[0];
        EXPECT_EQ(a.code, b.code);
    }
}
