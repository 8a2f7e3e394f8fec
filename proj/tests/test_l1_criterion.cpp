#include "krein/errors.hpp"
#include "krein/krein_solver.hpp"
#include "krein/l1_criterion.hpp"
#include "krein/random.hpp"

#include <gtest/gtest.h>

using namespace krein;

namespace {

// Independent generator test: M(e_k ± e_j) lies in {x : x_k >= Σ_{i≠k} |x_i|} for all j ≠ k.
bool preserves_on_generators(const Eigen::MatrixXd& m, Eigen::Index k, double tol = 1e-9) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0) >= -tol;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == k) continue;
    for (double s : {1.0, -1.0}) {
      const Eigen::VectorXd y = m.col(k) + s * m.col(j);
      const double rest = y.lpNorm<1>() - std::abs(y[k]);
      if (y[k] + tol < rest) return false;
    }
  }
  return true;
}

Eigen::MatrixXd random_near_criterion(Rng& rng, Eigen::Index n, Eigen::Index k) {
  Eigen::MatrixXd m = rng.uniform_vector(n * n, -1.0, 1.0).reshaped(n, n);
  m(k, k) = rng.uniform(0.0, 2.0 * static_cast<double>(n));
  return m;
}

}  // namespace

TEST(L1Matrix, NormIsMaxColumnSum) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd m = rng.gaussian_matrix(4, 4);
    EXPECT_DOUBLE_EQ(L1Matrix(m).norm(), m.cwiseAbs().colwise().sum().maxCoeff());
  }
  EXPECT_THROW(L1Matrix(Eigen::MatrixXd(2, 3)), DimensionError);
  EXPECT_THROW(L1Matrix(Eigen::MatrixXd(0, 0)), InvalidArgument);
  Eigen::MatrixXd nan = Eigen::MatrixXd::Zero(2, 2);
  nan(0, 1) = std::nan("");
  EXPECT_THROW(L1Matrix{nan}, InvalidArgument);
}

TEST(SatisfiesTkk, Examples) {
  for (Eigen::Index n : {1, 2, 5}) {
    const L1Matrix s = corner_unit(n);
    EXPECT_TRUE(satisfies_tkk(s, 0));
    const L1Matrix id(Eigen::MatrixXd::Identity(n, n));
    for (Eigen::Index k = 0; k < n; ++k) EXPECT_TRUE(satisfies_tkk(id, k));
  }
  const L1Matrix swap(Eigen::Matrix2d{{0, 1}, {1, 0}});
  EXPECT_FALSE(satisfies_tkk(swap, 0));
  EXPECT_FALSE(satisfies_tkk(swap, 1));
  const auto w = criterion_violation(swap, 0);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->k, 0);
  EXPECT_EQ(w->j, 1);
  EXPECT_LT(w->lhs, w->rhs);
  EXPECT_THROW(satisfies_tkk(swap, 2), InvalidArgument);
}

TEST(FindCertificate, Examples) {
  EXPECT_EQ(find_certificate_index(corner_unit(4)), 0);
  EXPECT_FALSE(find_certificate_index(L1Matrix(Eigen::Matrix2d{{0, 1}, {1, 0}})));
  EXPECT_EQ(find_certificate_index(L1Matrix(Eigen::Vector2d(2, 1).asDiagonal().toDenseMatrix())), 0);
  // Only the second index certifies.
  EXPECT_EQ(find_certificate_index(L1Matrix(Eigen::Matrix2d{{0, 0}, {0, 1}})), 1);
}

TEST(Invariance, Examples) {
  EXPECT_TRUE(criterion_implies_invariance(corner_unit(3), 0));
  EXPECT_TRUE(criterion_implies_invariance(L1Matrix(Eigen::Matrix3d::Identity()), 0));
  try {
    criterion_implies_invariance(L1Matrix(Eigen::Matrix2d{{0, 1}, {1, 0}}), 0);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& err) {
    EXPECT_NE(std::string(err.what()).find("j=2"), std::string::npos) << err.what();
  }
}

TEST(Invariance, EquivalentToGeneratorTest) {
  Rng rng(500);
  int accepted = 0;
  for (int t = 0; t < 500; ++t) {
    const Eigen::Index n = 1 + rng.index(6);
    const Eigen::Index k = rng.index(n);
    const Eigen::MatrixXd m = random_near_criterion(rng, n, k);
    const bool crit = satisfies_tkk(L1Matrix(m), k);
    EXPECT_EQ(crit, preserves_on_generators(m, k)) << m;
    if (crit) {
      ++accepted;
      EXPECT_TRUE(criterion_implies_invariance(L1Matrix(m), k));
    }
  }
  EXPECT_GT(accepted, 50);
  EXPECT_LT(accepted, 450);
}

TEST(Invariance, OperatorsPreservingTheConeFormAConeAndSemigroup) {
  Rng rng(77);
  int pairs = 0;
  for (int t = 0; t < 20000 && pairs < 200; ++t) {
    const Eigen::Index n = 3;
    const Eigen::MatrixXd a = random_near_criterion(rng, n, 0);
    const Eigen::MatrixXd b = random_near_criterion(rng, n, 0);
    if (!preserves_on_generators(a, 0) || !preserves_on_generators(b, 0)) continue;
    ++pairs;
    const double c = rng.uniform(0.0, 5.0);
    EXPECT_TRUE(satisfies_tkk(L1Matrix(a + b), 0));
    EXPECT_TRUE(satisfies_tkk(L1Matrix(c * a), 0));
    EXPECT_TRUE(satisfies_tkk(L1Matrix(a * b), 0, 1e-8));
  }
  EXPECT_EQ(pairs, 200);
}

TEST(Perturbation, Examples) {
  const PerturbationReport small = interior_perturbation(L1Matrix(0.1 * Eigen::Matrix2d::Identity()));
  EXPECT_TRUE(small.holds);
  EXPECT_NEAR(small.lhs_min, 1.1, 1e-12);
  const PerturbationReport zero = interior_perturbation(L1Matrix(Eigen::Matrix3d::Zero()));
  EXPECT_TRUE(zero.holds);
  EXPECT_DOUBLE_EQ(zero.lhs_bound, 1.0);
  EXPECT_THROW(interior_perturbation(L1Matrix(0.2 * Eigen::Matrix2d::Identity())), InvalidArgument);
}

TEST(Perturbation, SeededRadiusUpToPointOneNineNine) {
  Rng rng(200);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 2 + rng.index(8);
    Eigen::MatrixXd r = rng.uniform_vector(n * n, -1.0, 1.0).reshaped(n, n);
    const double target = t == 0 ? 0.19 : rng.uniform(0.0, 0.199);
    r *= target / r.cwiseAbs().colwise().sum().maxCoeff();
    const PerturbationReport rep = interior_perturbation(L1Matrix(r));
    EXPECT_TRUE(rep.holds);
    EXPECT_NEAR(rep.r_norm, target, 1e-12);
    EXPECT_GE(rep.lhs_min, rep.lhs_bound - 1e-12);
    EXPECT_LE(rep.rhs_max, rep.rhs_bound + 1e-12);
    EXPECT_GT(rep.lhs_bound, 0.6 - 1e-12);
    EXPECT_LT(rep.rhs_bound, 0.4);
  }
}

TEST(Pipeline, CertifiedMatricesHaveDualEigenvectors) {
  Rng rng(9);
  int solved = 0;
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = 2 + rng.index(5);
    const Eigen::Index k0 = rng.index(n);
    const Eigen::MatrixXd m = random_near_criterion(rng, n, k0);
    const auto k = find_certificate_index(L1Matrix(m));
    if (!k) continue;
    ++solved;
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, *k);
    const PositiveOperator op = make_positive_operator(m, make_l1_krein(n, *k), e, Norm::l1());
    const DualEigenpair p = solve_dual_eigenvector(op);
    EXPECT_LE(p.residual, 1e-8);
    EXPECT_TRUE(dual_contains(op.cone, p.h));
    EXPECT_NEAR(p.h[*k], 1.0, 1e-8);
  }
  EXPECT_GT(solved, 30);
}
