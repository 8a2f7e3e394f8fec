#include "krein/contraction_face.hpp"
#include "krein/errors.hpp"
#include "krein/random.hpp"
#include "krein/te_cone.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace krein;

namespace {

Eigen::VectorXd v(std::initializer_list<double> xs) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

Eigen::Matrix3d worked_t() {
  return (Eigen::Matrix3d() << 1, 0, 0, 0, 1, 0, 0, 0.5, 0.5).finished();
}

// Plain forward quotient at a single small step, in long double; reference for the face.
long double sup_quotient(const Eigen::VectorXd& e, const Eigen::VectorXd& x, long double a) {
  long double best = 0.0L;
  for (Eigen::Index i = 0; i < e.size(); ++i)
    best = std::max(best, std::abs(static_cast<long double>(e[i]) + a * x[i]));
  return (best - 1.0L) / a;
}

Eigen::MatrixXd te_generators(const Eigen::VectorXd& e, const Norm& norm) {
  const Eigen::Index n = e.size();
  Eigen::MatrixXd extremes;
  if (norm.kind() == Norm::Kind::L1) {
    extremes.resize(n, 2 * n);
    extremes << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  } else {
    extremes = krein::testing::sign_vectors(n);
  }
  Eigen::MatrixXd g(n, n + extremes.cols());
  g.leftCols(n) = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index c = 0; c < extremes.cols(); ++c) g.col(n + c) = e - extremes.col(c);
  return g;
}

}  // namespace

TEST(Monotone, StandardNormsPass) {
  for (const auto& norm : {Norm::linf(), Norm::l1(), Norm::l2(), Norm::weighted_sup(v({1, 2, 0.5}))}) {
    EXPECT_TRUE(check_monotone(make_monotone_space(3, norm)));
  }
  EXPECT_THROW(make_monotone_space(2, Norm::weighted_sup(v({1, 2, 3}))), DimensionError);
}

TEST(Dirder, Examples) {
  EXPECT_NEAR(dirder(Norm::linf(), v({1, 0.5}), v({0, 1})).value, 0.0, 1e-12);
  EXPECT_NEAR(dirder(Norm::linf(), v({1, 0.5}), v({1, 0})).value, 1.0, 1e-12);
  const DirectionalDerivative l1 = dirder(Norm::l1(), v({0.5, 0.5}), v({1, 1}));
  EXPECT_NEAR(l1.value, 2.0, 1e-9);
  EXPECT_NEAR(l1.numeric, 2.0, 1e-6);
  EXPECT_THROW(dirder(Norm::linf(), v({1, 0.5}), v({-1, 0})), InvalidArgument);
  EXPECT_THROW(dirder(Norm::linf(), v({2, 0.5}), v({1, 0})), InvalidArgument);
}

TEST(Dirder, QuotientIsMonotoneAndNumericMatchesClosedForm) {
  Rng rng(3);
  for (const auto& norm : {Norm::linf(), Norm::l1(), Norm::l2()}) {
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd e = rng.uniform_vector(4, 0.1, 1.0);
      if (t % 3 == 0) e[1] = e[0] = 1.0;
      e /= norm(e);
      const Eigen::VectorXd x = rng.uniform_vector(4);
      double prev = -std::numeric_limits<double>::infinity();
      for (int i = 20; i >= 0; --i) {
        const double a = std::ldexp(1e-2, -i);
        const double q = (norm(e + a * x) - 1.0) / a;
        EXPECT_GE(q, prev - 1e-6);
        prev = q;
      }
      const DirectionalDerivative d = dirder(norm, e, x);
      ASSERT_TRUE(d.closed_form);
      EXPECT_NEAR(d.numeric, *d.closed_form, 1e-6 * (1.0 + x.lpNorm<1>()));
    }
  }
}

TEST(Face, WorkedSupInstance) {
  const Eigen::VectorXd e = v({1, 1, 0.5});
  const FaceDescription f = compute_face(Norm::linf(), e);
  EXPECT_EQ(f.kind, FaceKind::CoordinateZeroSet);
  EXPECT_EQ(f.zero_set, (std::vector<Eigen::Index>{0, 1}));
  EXPECT_FALSE(f.trivial);
  ASSERT_EQ(f.witnesses.size(), 1u);
  EXPECT_EQ(f.witnesses[0], v({0, 0, 1}));
  Rng rng(100);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd x = rng.uniform_vector(3);
    for (Eigen::Index i = 0; i < 2; ++i)
      if (rng.uniform() < 0.5) x[i] = 0.0;
    const bool reference = sup_quotient(e, x, 1e-12L) < 1e-6L;
    EXPECT_EQ(face_contains(f, x), reference) << x.transpose();
  }
}

TEST(Face, TrivialFaces) {
  EXPECT_TRUE(compute_face(Norm::linf(), Eigen::VectorXd::Ones(3)).trivial);
  const FaceDescription l1 = compute_face(Norm::l1(), v({0.25, 0.25, 0.5}));
  EXPECT_TRUE(l1.trivial);
  EXPECT_EQ(l1.kind, FaceKind::NumericSample);
  EXPECT_FALSE(l1.note.empty());
  EXPECT_FALSE(face_contains(l1, v({0, 0, 1e-3})));
  EXPECT_TRUE(face_contains(l1, v({0, 0, 0})));
  // ℓ2 at a boundary point of the orthant: the face is the span of the zero coordinates.
  const FaceDescription l2 = compute_face(Norm::l2(), v({1, 0}));
  EXPECT_FALSE(l2.trivial);
  EXPECT_TRUE(face_contains(l2, v({0, 1})));
  EXPECT_FALSE(face_contains(l2, v({1, 1})));
}

TEST(Face, HereditaryAdditiveAndClosed) {
  const FaceDescription f = compute_face(Norm::weighted_sup(v({1, 2, 1, 4})), v({1, 2, 0.5, 1}));
  EXPECT_EQ(f.zero_set, (std::vector<Eigen::Index>{0, 1}));
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXd y = sample_face(f, static_cast<std::uint64_t>(t));
    const Eigen::VectorXd z = sample_face(f, static_cast<std::uint64_t>(t + 5000));
    ASSERT_TRUE(face_contains(f, y));
    EXPECT_TRUE(face_contains(f, y + z));
    const Eigen::VectorXd x = y.cwiseProduct(rng.uniform_vector(4));
    EXPECT_TRUE(face_contains(f, x));
  }
  // Limits of members stay in the face; members pushed off the pinned set leave it.
  const Eigen::VectorXd y = sample_face(f, 1);
  for (int k = 1; k < 25; ++k) {
    const Eigen::VectorXd xk = y + std::ldexp(1.0, -k) * Eigen::VectorXd::Unit(4, 0);
    EXPECT_FALSE(face_contains(f, xk, {}));
    EXPECT_NEAR(dirder(Norm::weighted_sup(v({1, 2, 1, 4})), v({1, 2, 0.5, 1}), xk).value,
                std::ldexp(1.0, -k), 1e-12);
  }
}

TEST(FaceTheorem, WorkedInstancePasses) {
  const FaceTheoremReport r =
      verify_face_theorem(worked_t(), v({1, 1, 0.5}), make_monotone_space(3, Norm::linf()));
  EXPECT_TRUE(r.all_pass());
  EXPECT_NEAR(r.operator_norm, 1.0, 1e-12);
  EXPECT_LE((r.growth - v({0, 0, 0.25})).norm(), 1e-12);
  EXPECT_EQ(r.face.zero_set, (std::vector<Eigen::Index>{0, 1}));
  EXPECT_GE(r.separation_min, 1.0 / 3.0 - 1e-6);
  EXPECT_GE(r.chain_bound_min, 2.0 / 3.0 - 1e-6);
}

TEST(FaceTheorem, SeparationOnSampledPairs) {
  // Independent recomputation of ‖e - (x - y)‖∞ over members of E = {x >= 0 : x_1 = x_2 = 0}.
  const Eigen::VectorXd e = v({1, 1, 0.5});
  Rng rng(8);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXd x = v({0, 0, rng.uniform(0.0, 3.0)});
    const Eigen::VectorXd y = v({0, 0, rng.uniform(0.0, 3.0)});
    worst = std::min(worst, (e - (x - y)).lpNorm<Eigen::Infinity>());
  }
  EXPECT_GE(worst, 1.0 / 3.0);
}

TEST(FaceTheorem, RejectsBrokenHypotheses) {
  const MonotoneSpace sp = make_monotone_space(2, Norm::linf());
  EXPECT_THROW(verify_face_theorem(Eigen::Matrix2d::Identity(), v({1, 1}), sp), HypothesisError);
  try {
    verify_face_theorem(2.0 * Eigen::Matrix2d::Identity(), v({1, 1}), sp);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& err) {
    EXPECT_NE(std::string(err.what()).find("shift"), std::string::npos) << err.what();
    ASSERT_TRUE(err.witness());
  }
  EXPECT_THROW(verify_face_theorem(Eigen::Matrix2d{{1, 0}, {-0.5, 0.5}}, v({1, 1}), sp), HypothesisError);
  EXPECT_THROW(verify_face_theorem(Eigen::Matrix2d{{1, 0}, {0, 0.5}}, v({1, 1}), sp), HypothesisError);
}

TEST(TeMembership, AgreesWithGeneratorHull) {
  Rng rng(500);
  int members = 0;
  int checked = 0;
  for (int t = 0; t < 500; ++t) {
    const Eigen::Index n = 2 + rng.index(5);
    const Norm norm = t % 2 ? Norm::l1() : Norm::linf();
    Eigen::VectorXd e = rng.uniform_vector(n, 0.2, 1.0);
    e /= norm(e);
    const TeDual dual = build_te_dual(e, norm);
    const Eigen::MatrixXd g = te_generators(e, norm);
    const Eigen::VectorXd x = rng.gaussian_vector(n) + 0.8 * e;
    const double dist = krein::testing::hull_distance(g, x);
    const double scale = x.norm();
    if (dist > 1e-9 * scale && dist < 1e-5 * scale) continue;  // too close to call
    ++checked;
    const bool oracle = dist <= 1e-9 * scale;
    const TeMembership m = te_membership(x, dual);
    EXPECT_EQ(m.member, oracle) << "x = " << x.transpose() << " e = " << e.transpose();
    if (!m.member) {
      EXPECT_LT(m.functional.dot(x), 0.0);
      EXPECT_TRUE(te_dual_contains(dual, m.functional));
    }
    members += oracle;
  }
  EXPECT_GT(checked, 450);
  EXPECT_GT(members, 50);
  EXPECT_LT(members, checked - 50);
}

TEST(TeSolve, WorkedInstance) {
  const DualEigenpair p =
      solve_te_eigenvector(worked_t(), v({1, 1, 0.5}), make_monotone_space(3, Norm::linf()));
  EXPECT_NEAR(p.lambda, 1.0, 1e-8);
  EXPECT_LE(p.residual, 1e-8);
  EXPECT_NEAR(p.h[2], 0.0, 1e-8);
  EXPECT_GE(p.h.minCoeff(), -1e-12);
  EXPECT_NEAR(p.h.sum(), 1.0, 1e-8);
}

TEST(TeSolve, IdentityAndRowStochastic) {
  const MonotoneSpace sp = make_monotone_space(4, Norm::linf());
  const DualEigenpair id = solve_te_eigenvector(Eigen::Matrix4d::Identity(), Eigen::Vector4d::Ones(), sp);
  EXPECT_NEAR(id.lambda, 1.0, 1e-12);
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd m = rng.uniform_vector(16, 0.05, 1.0).reshaped(4, 4);
    m = m.array().colwise() / m.rowwise().sum().array();
    const DualEigenpair p = solve_te_eigenvector(m, Eigen::Vector4d::Ones(), sp);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.transpose());
    Eigen::Index best = 0;
    (es.eigenvalues().array() - 1.0).abs().minCoeff(&best);
    Eigen::VectorXd ref = es.eigenvectors().col(best).real();
    ref /= ref.sum();
    EXPECT_NEAR(p.lambda, 1.0, 1e-8);
    EXPECT_LE((p.h - ref).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(TeSolve, OutputSupportedOnTheArgmax) {
  // h >= 0 with h(e) = ‖h‖₁ forces h to vanish off argmax e.
  Rng rng(44);
  const MonotoneSpace sp = make_monotone_space(5, Norm::linf());
  for (int t = 0; t < 30; ++t) {
    Eigen::VectorXd e = rng.uniform_vector(5, 0.2, 0.9);
    e[0] = e[3] = 1.0;
    // Top rows stochastic over the top coordinates, the others strictly growing.
    Eigen::MatrixXd m = rng.uniform_vector(25).reshaped(5, 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
      if (i == 0 || i == 3) {
        m(i, 1) = m(i, 2) = m(i, 4) = 0.0;
        m.row(i) /= m.row(i).sum();
      } else {
        m.row(i).setZero();
        m(i, 0) = std::min(1.0, e[i] + 0.05);
      }
    }
    const DualEigenpair p = solve_te_eigenvector(m, e, sp);
    EXPECT_LE(p.residual, 1e-8);
    for (Eigen::Index i : {1, 2, 4}) EXPECT_NEAR(p.h[i], 0.0, 1e-8);
  }
}

TEST(TeSolve, RejectsNormAboveOneAndShrinkage) {
  const MonotoneSpace sp = make_monotone_space(2, Norm::linf());
  EXPECT_THROW(solve_te_eigenvector(2.0 * Eigen::Matrix2d::Identity(), v({1, 1}), sp), HypothesisError);
  EXPECT_THROW(solve_te_eigenvector(Eigen::Matrix2d{{1, 0}, {0, 0.5}}, v({1, 1}), sp), HypothesisError);
}

TEST(FixedPoint, Examples) {
  const DualEigenpair a = fixed_point_to_eigenvector(Eigen::Matrix2d{{1, 0}, {0.5, 0.5}}, v({1, 1}), Norm::linf());
  EXPECT_NEAR(a.lambda, 1.0, 1e-8);
  EXPECT_NEAR(a.h[0], 1.0, 1e-7);
  EXPECT_NEAR(a.h[1], 0.0, 1e-7);
  const DualEigenpair b = fixed_point_to_eigenvector(Eigen::Matrix3d::Identity(), v({1, 0.2, 0.3}), Norm::linf());
  EXPECT_NEAR(b.lambda, 1.0, 1e-10);
  Eigen::Matrix3d cyc = Eigen::Matrix3d::Zero();
  cyc(0, 1) = cyc(1, 2) = cyc(2, 0) = 1.0;
  const DualEigenpair c = fixed_point_to_eigenvector(cyc, Eigen::Vector3d::Ones(), Norm::linf());
  EXPECT_NEAR(c.lambda, 1.0, 1e-8);
  EXPECT_LE((c.h - Eigen::Vector3d::Constant(1.0 / 3.0)).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(FixedPoint, RejectsMissingFixedPoint) {
  EXPECT_THROW(fixed_point_to_eigenvector(Eigen::Matrix2d{{0.5, 0}, {0, 0.5}}, v({1, 1}), Norm::linf()),
               HypothesisError);
  EXPECT_THROW(fixed_point_to_eigenvector(2.0 * Eigen::Matrix2d::Identity(), v({1, 1}), Norm::linf()),
               HypothesisError);
}

TEST(FixedPoint, SignedOperatorsOnOtherNorms) {
  // A reflection on ℓ2 has norm 1 and fixes its axis; no positivity in the orthant sense.
  const Eigen::Matrix2d refl{{1, 0}, {0, -1}};
  const DualEigenpair p = fixed_point_to_eigenvector(refl, v({1, 0}), Norm::l2());
  EXPECT_NEAR(p.lambda, 1.0, 1e-8);
  EXPECT_LE(dual_residual(refl, p.h, v({1, 0})), 1e-8);
  EXPECT_NEAR(p.h[0], 1.0, 1e-8);
}
