#pragma once

#include "krein/cone.hpp"
#include "krein/norm.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace krein {

/// A matrix together with the cone it preserves and a point e dominating the unit ball of
/// `norm` in the order of that cone. Build with make_positive_operator, which checks both.
struct PositiveOperator {
  Eigen::MatrixXd matrix;
  Cone cone;
  Eigen::VectorXd e;
  Norm norm;
  bool positivity_exhaustive = true;  // false when positivity was only sampled
  bool dominance_exhaustive = true;
  bool hypotheses_assumed = false;  // caller vouched for the hypotheses instead of checking
};

/// Throws HypothesisError (with the offending generator / ball point as witness) when T does
/// not preserve the cone or e does not dominate the ball. `assume_hypotheses` skips both checks.
PositiveOperator make_positive_operator(Eigen::MatrixXd matrix, Cone cone, Eigen::VectorXd e,
                                        Norm norm, const Tolerances& tol = {},
                                        bool assume_hypotheses = false);

enum class Method { FixedPoint, DenseFallback };
const char* to_string(Method method);

struct DualEigenpair {
  double lambda = 0.0;
  Eigen::VectorXd h;  // positive functional with h(e) = 1
  double residual = 0.0;  // ‖Tᵀh - λh‖∞
  long iterations = 0;
  Method method = Method::FixedPoint;
};

enum class Fallback { Auto, Never, Always };

struct SolverOptions {
  Tolerances tol;
  long max_iter = 20000;
  Fallback fallback = Fallback::Auto;
};

/// ‖Tᵀh - ((Tᵀh)(e)) h‖∞.
double dual_residual(const Eigen::MatrixXd& t, const Eigen::VectorXd& h, const Eigen::VectorXd& e);

/// Deterministic start of the iteration: the all-ones functional when it is positive,
/// otherwise a cone-specific central functional; renormalized so that f(e) = 1.
Eigen::VectorXd initial_functional(const PositiveOperator& op, const Tolerances& tol = {});

/// F_T(f) = (f + Tᵀf) / (f + Tᵀf)(e), a self-map of S = {f ∈ K* : f(e) = 1}.
Eigen::VectorXd krein_map(const PositiveOperator& op, const Eigen::VectorXd& f,
                          const Tolerances& tol = {});

/// Positive eigenvector of Tᵀ normalized at e. Iterates krein_map until the residual is below
/// tol.residual_tol; if that stalls, falls back to a dense eigensolve restricted to eigenvectors
/// in the dual cone (largest eigenvalue first, then lexicographically smallest h).
DualEigenpair solve_dual_eigenvector(const PositiveOperator& op, const SolverOptions& options = {});

struct CommutingFamily {
  std::vector<PositiveOperator> operators;
  double commutator_tol = 1e-9;  // on ‖AB - BA‖_F / (1 + ‖A‖_F ‖B‖_F)
};

inline constexpr std::size_t kMaxFamilySize = 16;

struct CommonEigenvector {
  Eigen::VectorXd h;
  std::vector<double> lambdas;
  std::vector<double> residuals;
  long iterations = 0;
};

/// Common positive eigenvector of the adjoints: solve for the first operator, then iterate each
/// following operator's krein_map inside the joint eigenspace slice of the ones already processed.
CommonEigenvector common_eigenvector(const CommutingFamily& family,
                                     const SolverOptions& options = {});

/// Turns an eigenpair of (I + T)ᵀ into one of Tᵀ and re-checks the residual against T.
DualEigenpair plus_identity_transfer(const DualEigenpair& shifted, const PositiveOperator& op,
                                     const Tolerances& tol = {});

}  // namespace krein
