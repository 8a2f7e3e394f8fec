#include "krein/errors.hpp"
#include "krein/krein_solver.hpp"
#include "krein/l1_criterion.hpp"
#include "krein/oracle.hpp"
#include "krein/random.hpp"

#include <gtest/gtest.h>

using namespace krein;
using namespace krein::oracle;

namespace {

const std::vector<Family> kAllFamilies{Family::NonnegOrthant,    Family::L1KreinViaPerturbation,
                                       Family::TeContraction,    Family::CommutingPair,
                                       Family::PositiveMapKraus, Family::PositiveMapTransposeComposed};

double distance_to_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& h) {
  const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(h);
  return (basis * c - h).norm();
}

}  // namespace

TEST(DenseEigs, SymmetricTwoByTwo) {
  const auto cs = dense_dual_eigs(Eigen::Matrix2d{{2, 1}, {1, 2}});
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_NEAR(cs[0].lambda.real(), 3.0, 1e-12);
  EXPECT_NEAR(cs[1].lambda.real(), 1.0, 1e-12);
  ASSERT_EQ(cs[0].basis.cols(), 1);
  Eigen::VectorXd h = cs[0].basis.col(0);
  h /= h.sum();
  EXPECT_NEAR(h[0], 0.5, 1e-12);
  EXPECT_NEAR(h[1], 0.5, 1e-12);
}

TEST(DenseEigs, IdentityHasFullEigenspace) {
  const auto cs = dense_dual_eigs(Eigen::Matrix3d::Identity());
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].multiplicity, 3);
  EXPECT_EQ(cs[0].basis.cols(), 3);
}

TEST(DenseEigs, NilpotentKernelOfTheTranspose) {
  // Tᵀ = [[0,0],[1,0]] annihilates (0,1) and maps (1,0) to (0,1).
  const auto cs = dense_dual_eigs(Eigen::Matrix2d{{0, 1}, {0, 0}});
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_NEAR(cs[0].lambda.real(), 0.0, 1e-7);
  EXPECT_EQ(cs[0].multiplicity, 2);
  ASSERT_EQ(cs[0].basis.cols(), 1);
  EXPECT_NEAR(std::abs(cs[0].basis(0, 0)), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(cs[0].basis(1, 0)), 1.0, 1e-7);
  const auto p = dual_cone_eigenpair(Eigen::Matrix2d{{0, 1}, {0, 0}}, make_orthant(2), Eigen::Vector2d(1, 1));
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->h[1], 1.0, 1e-7);
}

TEST(DenseEigs, ComplexPairsAreFlaggedAndResidualsSmall) {
  const auto rot = dense_dual_eigs(Eigen::Matrix2d{{0, -1}, {1, 0}});
  ASSERT_EQ(rot.size(), 2u);
  EXPECT_FALSE(rot[0].real);
  EXPECT_FALSE(rot[1].real);
  EXPECT_EQ(rot[0].basis.size(), 0);
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 1 + rng.index(20);
    const Eigen::MatrixXd m = rng.gaussian_matrix(n, n);
    int total = 0;
    for (const auto& c : dense_dual_eigs(m)) {
      total += c.multiplicity;
      if (!c.real) continue;
      for (Eigen::Index j = 0; j < c.basis.cols(); ++j) {
        const Eigen::VectorXd v = c.basis.col(j);
        EXPECT_LE((m.transpose() * v - c.lambda.real() * v).norm(), 1e-10 * std::max(1.0, m.norm()));
      }
    }
    EXPECT_EQ(total, n);
  }
  EXPECT_THROW(dense_dual_eigs(Eigen::MatrixXd::Identity(65, 65)), InvalidArgument);
}

TEST(Generate, Examples) {
  const Instance a = generate({Family::NonnegOrthant, 5, 7});
  EXPECT_GE(a.matrices.at(0).minCoeff(), 0.0);
  const Instance b = generate({Family::L1KreinViaPerturbation, 4, 3});
  EXPECT_EQ(find_certificate_index(L1Matrix(b.matrices.at(0))), 0);
  EXPECT_LT(b.perturbation_norm, 0.2);
  const Instance c = generate({Family::CommutingPair, 3, 1});
  ASSERT_EQ(c.matrices.size(), 2u);
  const Eigen::MatrixXd& t = c.matrices[0];
  EXPECT_LE((c.matrices[1] - (t * t + t)).norm(), 1e-14 * (1.0 + c.matrices[1].norm()));
  EXPECT_LE((t * c.matrices[1] - c.matrices[1] * t).norm(), 1e-12 * (1.0 + c.matrices[1].norm()));
}

TEST(Generate, DeterministicAndPreconditionsHold) {
  for (Family f : kAllFamilies) {
    EXPECT_EQ(family_from_string(to_string(f)), f);
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      const Eigen::Index n = std::min<Eigen::Index>(family_cap(f), 2 + static_cast<Eigen::Index>(seed % 4));
      const Instance x = generate({f, n, seed});
      const Instance y = generate({f, n, seed});
      ASSERT_EQ(x.matrices.size(), y.matrices.size());
      for (std::size_t i = 0; i < x.matrices.size(); ++i) EXPECT_TRUE(x.matrices[i] == y.matrices[i]);
      if (x.map) EXPECT_TRUE(x.map->action == y.map->action);
      switch (f) {
        case Family::NonnegOrthant:
          EXPECT_GE(x.matrices[0].minCoeff(), 0.0);
          break;
        case Family::L1KreinViaPerturbation:
          EXPECT_TRUE(satisfies_tkk(L1Matrix(x.matrices[0]), 0));
          break;
        case Family::TeContraction: {
          const Eigen::MatrixXd& t = x.matrices[0];
          EXPECT_GE(t.minCoeff(), 0.0);
          EXPECT_NEAR(t.rowwise().sum().maxCoeff(), 1.0, 1e-12);
          EXPECT_GE((t * x.e - x.e).minCoeff(), -1e-12);
          EXPECT_GT((t * x.e - x.e).maxCoeff(), 0.0);
          break;
        }
        case Family::CommutingPair:
          EXPECT_LE((x.matrices[0] * x.matrices[1] - x.matrices[1] * x.matrices[0]).norm(),
                    1e-12 * (1.0 + x.matrices[1].squaredNorm()));
          break;
        default:
          ASSERT_TRUE(x.map);
          EXPECT_NE(is_positive_map(*x.map, 200, seed).level, PositivityLevel::Falsified);
      }
    }
    EXPECT_THROW(generate({f, family_cap(f) + 1, 1}), InvalidArgument);
  }
  EXPECT_THROW(family_from_string("no_such_family"), InvalidArgument);
}

TEST(Generate, EveryConeInstanceHasADualConeEigenvector) {
  for (Family f : {Family::NonnegOrthant, Family::L1KreinViaPerturbation, Family::TeContraction,
                   Family::CommutingPair}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const Instance x = generate({f, 2 + static_cast<Eigen::Index>(seed % 5), seed});
      for (const auto& m : x.matrices) {
        const auto p = dual_cone_eigenpair(m, x.cone, x.e);
        ASSERT_TRUE(p) << to_string(f) << " seed " << seed;
        EXPECT_LE(p->residual, 1e-8);
        EXPECT_TRUE(dual_contains(x.cone, p->h));
      }
    }
  }
}

TEST(Generate, SolverEigenpairsAppearInDenseOutput) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance x = generate({Family::NonnegOrthant, 2 + static_cast<Eigen::Index>(seed % 7), seed});
    const PositiveOperator op = make_positive_operator(x.matrices[0], x.cone, x.e, x.norm);
    const DualEigenpair p = solve_dual_eigenvector(op);
    bool found = false;
    for (const auto& c : dense_dual_eigs(x.matrices[0])) {
      if (!c.real || std::abs(c.lambda.real() - p.lambda) > 1e-6 * (1.0 + p.lambda)) continue;
      found = found || distance_to_span(c.basis, p.h) <= 1e-6 * p.h.norm();
    }
    EXPECT_TRUE(found) << "seed " << seed;
  }
}

TEST(Differential, Examples) {
  const DifferentialSummary a = differential_run(Family::NonnegOrthant, 10, 200, 42);
  EXPECT_EQ(a.trials, 200);
  EXPECT_EQ(a.agreements, 200);
  EXPECT_TRUE(a.failures.empty());
  const DifferentialSummary b = differential_run(Family::PositiveMapKraus, 3, 100, 42);
  EXPECT_EQ(b.agreements, 100);
  const DifferentialSummary c = differential_run(Family::TeContraction, 6, 100, 42);
  EXPECT_EQ(c.agreements, 100);
}

TEST(Differential, OtherFamilies) {
  for (Family f : {Family::L1KreinViaPerturbation, Family::CommutingPair, Family::PositiveMapTransposeComposed}) {
    const DifferentialSummary s = differential_run(f, 3, 50, 7);
    EXPECT_EQ(s.agreements, 50) << to_string(f) << (s.failures.empty() ? "" : ": " + s.failures[0].note);
    EXPECT_LE(s.worst_residual, 1e-8);
  }
}

TEST(Differential, DeterministicAndMergeable) {
  const DifferentialSummary whole = differential_run(Family::NonnegOrthant, 6, 40, 5, true);
  const DifferentialSummary again = differential_run(Family::NonnegOrthant, 6, 40, 5, true);
  ASSERT_EQ(whole.records.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(whole.records[i].lambda_solver, again.records[i].lambda_solver);
    EXPECT_EQ(whole.records[i].seed, derive_seed(5, i));
    const TrialRecord single = run_trial(Family::NonnegOrthant, 6, static_cast<long>(i), 5);
    EXPECT_EQ(single.lambda_solver, whole.records[i].lambda_solver);
  }
  // Summaries of disjoint ranges merge to the whole, in either grouping.
  DifferentialSummary parts[3];
  for (auto& p : parts) {
    p.family = Family::NonnegOrthant;
    p.n = 6;
  }
  for (long i = 0; i < 40; ++i) {
    DifferentialSummary one;
    one.family = Family::NonnegOrthant;
    one.n = 6;
    const TrialRecord r = run_trial(Family::NonnegOrthant, 6, i, 5);
    one.trials = 1;
    one.agreements = r.agree ? 1 : 0;
    one.worst_relative_error = r.relative_error;
    one.worst_residual = r.residual;
    parts[i < 10 ? 0 : (i < 25 ? 1 : 2)].merge(one);
  }
  DifferentialSummary left = parts[0];
  left.merge(parts[1]);
  left.merge(parts[2]);
  DifferentialSummary right = parts[1];
  right.merge(parts[2]);
  DifferentialSummary left2 = parts[0];
  left2.merge(right);
  for (const auto* s : {&left, &left2}) {
    EXPECT_EQ(s->trials, whole.trials);
    EXPECT_EQ(s->agreements, whole.agreements);
    EXPECT_EQ(s->worst_relative_error, whole.worst_relative_error);
    EXPECT_EQ(s->worst_residual, whole.worst_residual);
  }
}
