#include <gtest/gtest.h>

#include "mirror/cli.hpp"
#include "mirror/io.hpp"
#include "oracles.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

using namespace mirror;
using nlohmann::json;
namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mirror");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mirror_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Compute, BellProbabilities) {
  const auto r = invoke({"compute", "--probs", "0.5,0.5", "--spectrum", "stellar"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("tool_version"), "1.0.0");
  EXPECT_NEAR(j.at("results").at("me").get<double>(), 1.0, 1e-14);
  EXPECT_NEAR(j.at("results").at("el").get<double>(), 1.0, 1e-14);
}

TEST(Compute, StateFile) {
  const auto s = random_pure(3, 2, 12);
  const fs::path path = scratch("state.json");
  std::ofstream(path) << io::state_to_json(s).dump();
  const auto r = invoke({"compute", "--state", path.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json res = json::parse(r.out).at("results");
  const auto p = oracle::svd_probs(s.amplitudes());
  EXPECT_NEAR(res.at("el").get<double>(), oracle::linear_entropy(p), 1e-12);
  EXPECT_NEAR(res.at("me").get<double>(), oracle::stellar_me(p), 1e-12);
}

TEST(Compute, SpectrumFromGapsAndFile) {
  const auto r = invoke({"compute", "--probs", "0.6,0.4", "--spectrum", "gaps:1,0"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(json::parse(r.out).at("results").at("me").get<double>(), 0.0, 1e-14);

  const fs::path path = scratch("spec.json");
  std::ofstream(path) << json{{"d", 3}, {"thetas", {0.0, 1.0, 2.5}}}.dump();
  const auto f = invoke({"compute", "--probs", "0.5,0.3,0.2", "--spectrum", "file:" + path.string()});
  ASSERT_EQ(f.code, cli::kExitOk) << f.err;
  EXPECT_NEAR(json::parse(f.out).at("results").at("me").get<double>(),
              1.0 - oracle::fidelity({0.5, 0.3, 0.2}, {0.0, 1.0, 2.5}), 1e-12);
}

TEST(Spectrum, Stellar4) {
  const auto r = invoke({"spectrum", "--d", "4", "--kind", "stellar"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json res = json::parse(r.out).at("results");
  const double pi = oracle::kPi;
  const std::vector<double> want = {pi / 4, 3 * pi / 4, 5 * pi / 4, 7 * pi / 4};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(res.at("phases")[k].get<double>(), want[k], 1e-14);
    EXPECT_NEAR(res.at("gaps")[k].get<double>(), 0.25, 1e-14);
  }
  EXPECT_EQ(res.at("degeneracy"), 1);
  EXPECT_EQ(res.at("faithful"), true);
}

TEST(Verify, SandwichQubit) {
  const auto r = invoke({"verify", "theorem4", "--d", "2", "--trials", "100"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("results").at("failures"), 0);
}

TEST(Verify, SmallSuites) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify", "theorem3", "--d", "3", "--trials", "20"},
        {"verify", "witness", "--d", "4"},
        {"verify", "locc", "--d", "2", "--trials", "20"},
        {"verify", "majorization", "--d", "4", "--samples", "20", "--subdiv", "8"},
        {"verify", "lemma1", "--d", "3", "--trials", "10", "--unitaries", "20"},
        {"verify", "unitary", "--d", "3", "--samples", "10"}}) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, cli::kExitOk) << args[1] << ": " << r.err;
    EXPECT_TRUE(json::parse(r.out).at("results").at("passed").get<bool>()) << args[1];
  }
}

TEST(Errors, ValidationExitsOne) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"compute", "--probs", "0.5,0.6"},
        {"compute", "--probs", "0.5,abc"},
        {"compute", "--state", "/nonexistent/state.json"},
        {"compute", "--probs", "0.5,0.5", "--spectrum", "gaps:0.2,0.2"},
        {"spectrum", "--d", "0"},
        {"verify", "nonsense"},
        {"compute"}}) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, cli::kExitValidation) << args[0] << " " << (args.size() > 1 ? args[1] : "");
    EXPECT_EQ(r.err.rfind("error[validation]:", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  }
}

TEST(Output, AtomicFile) {
  const fs::path path = scratch("out.json");
  fs::remove(path);
  const auto r = invoke({"compute", "--probs", "0.7,0.3", "--out", path.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
  const json j = json::parse(slurp(path));
  EXPECT_NEAR(j.at("results").at("me").get<double>(), 4 * 0.7 * 0.3, 1e-14);
}

TEST(Sample, ByteIdentical) {
  const auto a = invoke({"sample", "--d", "3", "--samples", "200", "--seed", "5"});
  const auto b = invoke({"sample", "--d", "3", "--samples", "200", "--seed", "5"});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("el,estar\n", 0), 0u);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 201);
  EXPECT_NE(a.out, invoke({"sample", "--d", "3", "--samples", "200", "--seed", "6"}).out);
}

TEST(Sample, BinaryMatchesLibrary) {
  const fs::path path = scratch("sample.csv");
  const std::string cmd = std::string(MIRROR_CLI_PATH) + " sample --d 2 --samples 50 --seed 3 --out " + path.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(path), invoke({"sample", "--d", "2", "--samples", "50", "--seed", "3"}).out);
}

TEST(Io, RoundTrips) {
  const auto s = random_pure(2, 3, 1);
  const auto back = io::state_from_json(io::state_to_json(s));
  EXPECT_EQ(back.amplitudes(), s.amplitudes());
  const auto spec = LUSpectrum::from_phases({0.4, 2.0, 5.5});
  // Reports carry every representation; input files take one of them.
  const json full = io::lu_spectrum_to_json(spec);
  const auto again = io::lu_spectrum_from_json(json{{"d", 3}, {"thetas", full.at("phases")}});
  EXPECT_EQ(again, spec);
  const auto by_gaps = io::lu_spectrum_from_json(json{{"d", 3}, {"gaps", full.at("gaps")}});
  EXPECT_LT((by_gaps.thetas() - spec.thetas()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(io::lu_spectrum_from_json(json{{"d", 2}, {"thetas", {0, 1}}, {"gaps", {0.5, 0.5}}}), ValidationError);
  EXPECT_THROW(io::state_from_json(json{{"dims", {2, 2}}, {"re", {1, 0, 0}}, {"im", {0, 0, 0, 0}}}), ValidationError);
}

TEST(Io, RealFormattingRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.0, 1e-300, 0.0, -7.25}) EXPECT_EQ(std::stod(io::format_real(x)), x);
  EXPECT_EQ(io::parse_real_list("1, 2.5,3", "x"), (std::vector<double>{1, 2.5, 3}));
  EXPECT_THROW(io::parse_real_list("", "x"), ValidationError);
  EXPECT_EQ(io::parse_spectrum_arg("identity", 3), identity_spectrum(3));
  EXPECT_THROW(io::parse_spectrum_arg("weird", 3), ValidationError);
}

}  // namespace
