#pragma once

#include "krein/cone.hpp"
#include "krein/krein_solver.hpp"
#include "krein/norm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace krein {

/// R^n ordered by the orthant with a monotone norm (0 <= x <= y implies ‖x‖ <= ‖y‖).
struct MonotoneSpace {
  Eigen::Index n = 0;
  Norm norm = Norm::linf();
};

MonotoneSpace make_monotone_space(Eigen::Index n, Norm norm);

/// Sampled monotonicity check on ordered pairs 0 <= x <= y.
Verdict check_monotone(const MonotoneSpace& space, long trials = 1000, std::uint64_t seed = 0x5eed);

// ---- directional derivative of the norm ------------------------------------------------

/// Dyadic descent for lim_{α→0+} (N(α) - N(0))/α with N convex: evaluates the quotient at
/// α = alpha_probe·2^{-i}, i = 0..20, and stops once two successive quotients agree to within
/// the rounding noise of N (or the sequence rises, which only rounding can cause).
struct QuotientDescent {
  double value = 0.0;
  double alpha = 0.0;  // step at which the returned quotient was taken
  int steps = 0;
};
QuotientDescent quotient_descent(const std::function<long double(double)>& norm_at,
                                 double alpha_probe, long double unit_roundoff);

struct DirectionalDerivative {
  double value = 0.0;                  // closed form where one exists, else numeric
  double numeric = 0.0;                // dyadic descent
  std::optional<double> closed_form;
  double alpha = 0.0;
};

/// One-sided derivative of ‖·‖ at e in direction x >= 0. Throws InvalidArgument when x has a
/// negative coordinate or ‖e‖ differs from 1 by more than tol.membership_tol.
DirectionalDerivative dirder(const Norm& norm, const Eigen::VectorXd& e, const Eigen::VectorXd& x,
                             const Tolerances& tol = {});

// ---- the face E = {x >= 0 : dirder(e, x) = 0} --------------------------------------------

enum class FaceKind { CoordinateZeroSet, SpectralProjectionKernel, NumericSample };
const char* to_string(FaceKind kind);

struct FaceDescription {
  FaceKind kind = FaceKind::CoordinateZeroSet;
  Eigen::Index n = 0;
  std::vector<Eigen::Index> zero_set;  // coordinates pinned to 0 (zero-based)
  Eigen::MatrixXd projector;           // SpectralProjectionKernel only
  std::vector<Eigen::VectorXd> witnesses;  // members of E; for coordinate faces, its generators
  bool trivial = false;                // E = {0}
  std::string note;
  Norm norm = Norm::linf();
  Eigen::VectorXd e;
};

FaceDescription compute_face(const Norm& norm, const Eigen::VectorXd& e, const Tolerances& tol = {});

/// x ∈ E: coordinate faces test the pinned coordinates, numeric faces use dirder < tol.
bool face_contains(const FaceDescription& face, const Eigen::VectorXd& x, const Tolerances& tol = {});

/// Random nonnegative combinations of the witnesses (zero vector when E is trivial).
Eigen::VectorXd sample_face(const FaceDescription& face, std::uint64_t seed);

struct SeparationRecord {
  double distance = 0.0;     // ‖e - (x - y)‖
  double quotient = 0.0;     // q(α) = (‖e + α(x-y)_+‖ - 1)/α at the probe step
  double alpha = 0.0;
  double chain_bound = 0.0;  // 1 - q(α): 1 + α <= ‖e + α(x-y)_+‖ + α‖e - (x-y)‖ forces distance >= this
};

struct FaceTheoremReport {
  Eigen::VectorXd e;       // normalized to ‖e‖ = 1
  double operator_norm = 0.0;
  Eigen::VectorXd growth;  // Te - e
  FaceDescription face;
  bool growth_in_face = false;   // Te - e ∈ E
  bool invariant = false;        // T(E) ⊆ E
  bool additive = false;         // E + E ⊆ E on samples
  bool hereditary = false;       // 0 <= x <= y ∈ E implies x ∈ E on samples
  bool e_outside = false;        // e ∉ E
  bool ideal_invariant = false;  // T(E - E) ⊆ E - E
  double separation_min = 0.0;   // min sampled ‖e - (x - y)‖
  double separation_threshold = 1.0 / 3.0;
  double chain_bound_min = 0.0;  // min sampled 1 - q(α); at least 2/3 whenever q(α) <= 1/3
  bool separation_ok = false;
  long samples = 0;
  std::vector<SeparationRecord> separation;  // first few pairs, for inspection

  bool all_pass() const noexcept {
    return growth_in_face && invariant && additive && hereditary && e_outside && ideal_invariant &&
           separation_ok;
  }
};

inline constexpr double kNormOneTol = 1e-9;

/// Checks the hypotheses (T >= 0, ‖T‖ = 1, Te >= e with Te ≠ e) and every conclusion on E.
/// Hypothesis failures throw HypothesisError with a witness; a norm above 1 is the scaled
/// shift situation in which the conclusion is known to fail.
FaceTheoremReport verify_face_theorem(const Eigen::MatrixXd& t, const Eigen::VectorXd& e,
                                      const MonotoneSpace& space, const Tolerances& tol = {},
                                      long samples = 200, std::uint64_t seed = 0x5eed);

/// Positive eigenvector of Tᵀ for T >= 0, ‖T‖ = 1, Te >= e, over the cone generated by the
/// orthant and e - B. e is rescaled to norm one; h is normalized at that rescaled e.
DualEigenpair solve_te_eigenvector(const Eigen::MatrixXd& t, const Eigen::VectorXd& e,
                                   const MonotoneSpace& space, const SolverOptions& options = {});

/// Positive eigenvector of Tᵀ for ‖T‖ = 1 with a fixed point e (‖e‖ = 1), via the cone over
/// 2e + B, which T preserves. h is normalized so that h(e) = 1.
DualEigenpair fixed_point_to_eigenvector(const Eigen::MatrixXd& t, const Eigen::VectorXd& e,
                                         const Norm& norm, const SolverOptions& options = {});

}  // namespace krein
