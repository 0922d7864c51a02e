#include <jetad/ad_macro.hpp>
#include <jetad/cli.hpp>
#include <jetad/parser.hpp>
#include <jetad/typecheck.hpp>

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace jetad;

namespace {

struct Result
{
    int code;
    std::string out, err;
};

Result jetad_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "jetad");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string program(const char* name) { return std::string(JETAD_PROGRAMS_DIR) + "/" + name; }

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_file(const std::string& name, const std::string& contents)
{
    const auto path = std::filesystem::temp_directory_path() / ("jetad_cli_test_" + name);
    std::ofstream(path) << contents;
    return path.string();
}

} // namespace

TEST(Cli, CheckNetwork)
{
    const auto r = jetad_cli({"check", program("network.ad")});
    ASSERT_EQ(r.code, 0) << r.err;
    const Type t = parse_type(r.out);
    ASSERT_TRUE(t.is_function());
    EXPECT_EQ(t.domain().components()[0], parse_type("(real * real)"));
    EXPECT_TRUE(t.codomain().is_real());
}

TEST(Cli, TransformReparsesAtDerivedType)
{
    for (const char* mode : {"full", "restricted22"}) {
        const auto r = jetad_cli({"transform", program("missing_data.ad"), "--k", "2", "--r", "2", "--mode", mode});
        ASSERT_EQ(r.code, 0) << r.err;
        const auto cfg = std::string(mode) == "full" ? MacroConfig::full(2, 2) : MacroConfig::restricted22();
        const Type want = d_type(cfg, infer({}, parse_term(slurp(program("missing_data.ad")))));
        EXPECT_EQ(infer({}, parse_term(r.out)), want) << mode;
    }
}

TEST(Cli, TransformJsonWithContext)
{
    const auto r = jetad_cli({"transform", "--expr", "x * y", "--var", "x:real", "--var", "y:real", "--k", "1",
                              "--r", "2", "--format", "json", "--normalize"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("type"), "(real * real * real)");
    EXPECT_EQ(j.at("context").at("x"), "(real * real * real)");
    Context ctx;
    ctx.add("x", Type::real_power(3));
    ctx.add("y", Type::real_power(3));
    EXPECT_EQ(infer(ctx, parse_term(j.at("term").get<std::string>())), Type::real_power(3));
}

TEST(Cli, Eval)
{
    const auto inputs = temp_file("eval.json", R"({"args": [[[1, 2, 3], [4, 5, 6]]]})");
    const auto r = jetad_cli({"eval", program("inner_product.ad"), "--inputs", inputs});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out), 32.0);
}

TEST(Cli, EvalBindsContext)
{
    const auto inputs = temp_file("ctx.json", R"({"x": 2, "args": [3]})");
    const auto r = jetad_cli({"eval", "--expr", "fun y : real -> x * y", "--var", "x:real", "--inputs", inputs});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out), 6.0);
}

TEST(Cli, Jet)
{
    const auto r = jetad_cli({"jet", "--expr", "x * x", "--var", "x:real", "--k", "1", "--r", "2", "--point", "3",
                              "--directions", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("coeffs").at("0"), 9.0);
    EXPECT_EQ(j.at("coeffs").at("1"), 6.0);
    EXPECT_EQ(j.at("coeffs").at("2"), 2.0);
    EXPECT_EQ(j.at("variables"), nlohmann::json::array({"x"}));
}

TEST(Cli, JetShapeErrors)
{
    EXPECT_EQ(jetad_cli({"jet", "--expr", "x", "--var", "x:real", "--point", "1,2", "--directions", "1"}).code, 64);
    EXPECT_EQ(jetad_cli({"jet", "--expr", "x", "--var", "x:real", "--k", "2", "--point", "1", "--directions", "1"}).code,
              64);
}

TEST(Cli, Selftest)
{
    const auto r = jetad_cli({"selftest", "--report", "json", "--points", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(Cli, SelftestFailureExitCode)
{
    const auto dir = std::filesystem::temp_directory_path() / "jetad_cli_test_bad";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "bad.ad") << "fun x : real -> sq(x)";
    const auto ops = temp_file("bad.ops", "op sq/1 = x1 * x1 deriv 1 = x1 deriv 2 = 2");
    const auto r = jetad_cli({"--ops", ops, "selftest", "--programs", dir.string()});
    EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(jetad_cli({"check", "--expr", "x +"}).code, 2);
    EXPECT_EQ(jetad_cli({"check", "--expr", "x"}).code, 1);
    EXPECT_EQ(jetad_cli({"check", "--expr", "<1, 2> + 1"}).code, 1);
    EXPECT_EQ(jetad_cli({}).code, 64);
    EXPECT_EQ(jetad_cli({"transform", "--expr", "1", "--r", "3"}).code, 64);
    EXPECT_EQ(jetad_cli({"transform", "--expr", "1", "--mode", "restricted22"}).code, 64);
    EXPECT_EQ(jetad_cli({"check", "/nonexistent/file.ad"}).code, 64);
    EXPECT_EQ(jetad_cli({"check", "--var", "x", "--expr", "x"}).code, 64);
}

TEST(Cli, OpsFile)
{
    const auto ops = temp_file("exp.ops", "op exp/1 deriv 1 = exp(x1) deriv 2 = exp(x1)");
    const auto r = jetad_cli({"--ops", ops, "jet", "--expr", "exp(2 * x)", "--var", "x:real", "--r", "2", "--point",
                              "0", "--directions", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_DOUBLE_EQ(j.at("coeffs").at("1").get<double>(), 2.0);
    EXPECT_DOUBLE_EQ(j.at("coeffs").at("2").get<double>(), 4.0);
}

TEST(Cli, DualNumberJetOfProduct)
{
    const auto r = jetad_cli({"jet", "--expr", "x * y", "--var", "x:real", "--var", "y:real", "--point", "3,5",
                              "--directions", "1,0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out).at("coeffs"), nlohmann::json::parse(R"({"0": 15, "1": 5})"));
}

TEST(Cli, SigmoidTransformUsesTableTerm)
{
    const auto r = jetad_cli({"transform", "--expr", "sigmoid(x)", "--var", "x:real"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "match x with <x1_0, x1_1> -> <sigmoid(x1_0), x1_1 * (let y = sigmoid(x1_0) in y * (1 - y))>\n");
}

TEST(Cli, EvalInputErrors)
{
    const auto missing = temp_file("missing.json", R"({})");
    EXPECT_EQ(jetad_cli({"eval", "--expr", "x", "--var", "x:real", "--inputs", missing}).code, 1);
    const auto bad = temp_file("bad.json", "{");
    EXPECT_EQ(jetad_cli({"eval", "--expr", "1", "--inputs", bad}).code, 64);
}
