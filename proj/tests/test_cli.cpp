#include "krein/cli.hpp"
#include "krein/io.hpp"
#include "krein/manifest.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using krein::io::Json;

namespace {

struct Result {
  int code;
  Json out;
  std::string raw_out;
  std::string err;
  Json manifest;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = krein::cli::run(args, out, err);
  Result r{code, Json(), out.str(), err.str(), Json()};
  if (!r.raw_out.empty()) r.out = Json::parse(r.raw_out, nullptr, false);
  // The manifest is the last line on stderr.
  const std::string e = r.err;
  const auto pos = e.rfind('\n', e.size() >= 2 ? e.size() - 2 : 0);
  r.manifest = Json::parse(pos == std::string::npos ? e : e.substr(pos + 1), nullptr, false);
  return r;
}

std::string write_temp(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::path(::testing::TempDir()) / name;
  std::ofstream(path) << contents;
  return path.string();
}

const std::string kCorner = "[[1,0,0],[0,0,0],[0,0,0]]";
const std::string kSym = "[[2,1],[1,2]]";

}  // namespace

TEST(Sha256, KnownVector) {
  EXPECT_EQ(krein::cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Criterion, CornerUnitCertifiesFirstIndex) {
  const Result r = run({"criterion", "--matrix", kCorner});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.at("k"), 1);
  EXPECT_TRUE(r.out.at("satisfied").get<bool>());
  EXPECT_TRUE(r.out.at("invariance").get<bool>());
}

TEST(Criterion, SwapIsRejectedWithWitness) {
  const Result r = run({"criterion", "--matrix", "[[0,1],[1,0]]"});
  EXPECT_EQ(r.code, 1);
  ASSERT_EQ(r.out.at("witnesses").size(), 2u);
  const Json& w = r.out.at("witnesses")[0];
  EXPECT_EQ(w.at("k"), 1);
  EXPECT_EQ(w.at("j"), 2);
  EXPECT_LT(w.at("lhs").get<double>(), w.at("rhs").get<double>());
  const Result k2 = run({"criterion", "--matrix", "[[0,1],[1,0]]", "--k", "2"});
  EXPECT_EQ(k2.code, 1);
  EXPECT_EQ(k2.out.at("witness").at("k"), 2);
  EXPECT_EQ(run({"criterion", "--matrix", kCorner, "--k", "4"}).code, 65);
}

TEST(Solve, SymmetricOrthant) {
  const Result r = run({"solve", "--matrix", kSym, "--cone", R"({"kind":"orthant","params":{"n":2}})", "--e", "[1,1]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.out.at("lambda").get<double>(), 3.0, 1e-8);
  const Eigen::VectorXd h = krein::io::parse_vector(r.out.at("h"));
  EXPECT_NEAR(h[0], 0.5, 1e-8);
  EXPECT_EQ(r.out.at("method"), "fixed_point");
  // Manifest: digests of the inline inputs, tolerances, exit code.
  ASSERT_TRUE(r.manifest.is_object()) << r.err;
  EXPECT_EQ(r.manifest.at("exit_code"), 0);
  bool found = false;
  for (const auto& in : r.manifest.at("inputs")) found = found || in.at("sha256") == krein::cli::sha256_hex(kSym);
  EXPECT_TRUE(found);
  EXPECT_EQ(r.manifest.at("tolerances").at("residual_tol"), 1e-8);
  EXPECT_EQ(r.manifest.at("command_line")[1], "solve");
}

TEST(Solve, FilesAndManifestFile) {
  const std::string m = write_temp("m.json", R"({"rows":2,"cols":2,"data":[[2,1],[1,2]]})");
  const std::string c = write_temp("c.json", R"({"kind":"l1krein","params":{"n":2,"k":1}})");
  const std::string e = write_temp("e.json", "[1,0]");
  const std::string mf = (std::filesystem::path(::testing::TempDir()) / "manifest.json").string();
  const Result r = run({"--manifest", mf, "solve", "--matrix", m, "--cone", c, "--e", e});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.out.at("lambda").get<double>(), 3.0, 1e-8);
  std::ifstream in(mf);
  const Json manifest = Json::parse(in);
  EXPECT_EQ(manifest.at("inputs").size(), 3u);
  EXPECT_EQ(manifest.at("inputs")[0].at("source"), c);
}

TEST(Solve, ExitCodes) {
  const std::string orthant = R"({"kind":"orthant","params":{"n":2}})";
  const Result hyp = run({"solve", "--matrix", "[[0,-1],[1,0]]", "--cone", orthant, "--e", "[1,1]"});
  EXPECT_EQ(hyp.code, 2);
  EXPECT_EQ(hyp.out.at("error"), "hypothesis");
  EXPECT_TRUE(hyp.out.contains("witness"));
  const Result solver = run({"solve", "--matrix", "[[0,1],[0,0]]", "--cone", orthant, "--e", "[1,1]",
                             "--fallback", "never", "--max-iter", "5"});
  EXPECT_EQ(solver.code, 3);
  EXPECT_TRUE(solver.out.contains("best_residual"));
  EXPECT_EQ(run({"solve", "--matrix", "[[2,1],[1,2]", "--cone", orthant, "--e", "[1,1]"}).code, 64);
  EXPECT_EQ(run({"solve", "--matrix", "/no/such/file.json", "--cone", orthant, "--e", "[1,1]"}).code, 64);
  EXPECT_EQ(run({"solve", "--matrix", kSym, "--cone", orthant, "--e", "[1,1,1]"}).code, 65);
  EXPECT_EQ(run({"solve", "--matrix", "[[1,2],[3]]", "--cone", orthant, "--e", "[1,1]"}).code, 65);
  EXPECT_EQ(run({"solve", "--matrix", kSym}).code, 64);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"solve", "--matrix", kSym, "--cone", R"({"kind":"cylinder"})", "--e", "[1,1]"}).code, 64);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Face, ZeroSetAndTheoremReport) {
  const Result r = run({"face", "--norm", "linf", "--e", "[1,1,0.5]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.at("zero_set"), Json::parse("[1,2]"));
  EXPECT_EQ(r.out.at("kind"), "coordinate_zero_set");
  const Result full = run({"face", "--e", "[1,1,0.5]", "--matrix", "[[1,0,0],[0,1,0],[0,0.5,0.5]]"});
  ASSERT_EQ(full.code, 0) << full.err;
  EXPECT_TRUE(full.out.at("checks").at("all_pass").get<bool>());
  EXPECT_GE(full.out.at("checks").at("separation_min").get<double>(), 1.0 / 3.0);
  EXPECT_EQ(run({"face", "--e", "[1,1]", "--matrix", "[[2,0],[0,2]]"}).code, 2);
}

TEST(TeSolve, WorkedInstance) {
  const Result r = run({"te-solve", "--matrix", "[[1,0,0],[0,1,0],[0,0.5,0.5]]", "--e", "[1,1,0.5]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.out.at("lambda").get<double>(), 1.0, 1e-8);
  EXPECT_NEAR(r.out.at("h")[2].get<double>(), 0.0, 1e-8);
}

TEST(Channel, Representations) {
  const Result k = run({"channel", "--kraus", "[[[1,0],[0,0]],[[0,0],[0,0.5]]]"});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_EQ(k.out.at("positivity").at("level"), "certified_cp");
  EXPECT_NEAR(k.out.at("fixed_state").at("lambda").get<double>(), 1.0, 1e-8);
  // Transpose on M_2 as an action matrix over row-major matrix units.
  const Result t = run({"channel", "--action", "[[1,0,0,0],[0,0,1,0],[0,1,0,0],[0,0,0,1]]"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(t.out.at("positivity").at("level"), "sampled_positive");
  const Result c = run({"channel", "--choi",
                        R"({"basis":"row_major_matrix_units","data":[[1,0,0,1],[0,0,0,0],[0,0,0,0],[1,0,0,1]]})"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out.at("positivity").at("level"), "certified_cp");
  // X - 2 tr(X) I/2 = X - tr(X) I.
  const Result bad = run({"channel", "--action", "[[0,0,0,-1],[0,1,0,0],[0,0,1,0],[-1,0,0,0]]"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(bad.out.at("positivity").at("level"), "falsified");
  EXPECT_EQ(run({"channel"}).code, 64);
  EXPECT_EQ(run({"channel", "--choi", R"({"basis":"column_major","data":[[1]]})"}).code, 64);
}

TEST(Common, Pair) {
  const Result r = run({"common", "--matrices", kSym, "[[5,4],[4,5]]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.out.at("lambdas")[0].get<double>(), 3.0, 1e-8);
  EXPECT_NEAR(r.out.at("lambdas")[1].get<double>(), 9.0, 1e-8);
  EXPECT_EQ(run({"common", "--matrices", "[[1,1],[0,1]]", "[[1,0],[1,1]]"}).code, 2);
}

TEST(Oracle, SummaryAndDeterminism) {
  const Result a = run({"oracle", "--family", "nonneg_orthant", "--n", "4", "--trials", "10", "--seed", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out.at("agreements"), 10);
  EXPECT_EQ(a.manifest.at("seed"), 3);
  const Result b = run({"oracle", "--family", "nonneg_orthant", "--n", "4", "--trials", "10", "--seed", "3"});
  EXPECT_EQ(a.raw_out, b.raw_out);
  const Result v = run({"oracle", "--family", "te_contraction", "--n", "3", "--trials", "4", "--verbose"});
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(v.out.at("records").size(), 4u);
  EXPECT_EQ(run({"oracle", "--family", "bogus"}).code, 65);
  EXPECT_EQ(run({"oracle", "--family", "positive_map_kraus", "--n", "40"}).code, 65);
}

TEST(RoundTrip, OutputsReparse) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6.5;
  EXPECT_EQ(krein::io::parse_matrix(krein::io::to_json(m)), m);
  Eigen::MatrixXd g(2, 2);
  g << 1, 1, 0, 1;
  for (const auto& cone : {krein::make_orthant(3), krein::make_l1_krein(4, 2), krein::make_psd(2),
                           krein::make_polyhedral(g),
                           krein::make_shifted_ball(Eigen::Vector2d(2, 1), krein::Norm::weighted_sup(Eigen::Vector2d(1, 2)))}) {
    const Json j = krein::io::to_json(cone);
    EXPECT_EQ(krein::io::to_json(krein::io::parse_cone(Json::parse(j.dump()))), j);
  }
  krein::CMatrix c(1, 2);
  c << std::complex<double>(1, -2), 3.0;
  EXPECT_EQ(krein::io::parse_complex_matrix(krein::io::to_json(c)), c);
  const Result r = run({"solve", "--matrix", kSym, "--cone", R"({"kind":"orthant","params":{"n":2}})", "--e", "[1,1]"});
  const Result again = run({"solve", "--matrix", r.out.dump(), "--cone", R"({"kind":"orthant","params":{"n":2}})", "--e", "[1,1]"});
  EXPECT_EQ(again.code, 64);  // an eigenpair is not a matrix
}
