#pragma once

#include "krein/cone.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace krein {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Row-major vectorization: vec(X)[i·n + j] = X(i, j).
CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, Eigen::Index n);

/// Self-adjoint complex matrix. Construction rejects matrices that are not Hermitian within
/// 1e-12 (relative to max(1, max |a_ij|)) and symmetrizes away the rounding.
class HermMatrix {
 public:
  explicit HermMatrix(const CMatrix& a);
  static HermMatrix from_real(const Eigen::MatrixXd& a) { return HermMatrix(a.cast<std::complex<double>>()); }

  Eigen::Index n() const noexcept { return a_.rows(); }
  const CMatrix& matrix() const noexcept { return a_; }
  /// Ascending real eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  double operator_norm() const;

 private:
  CMatrix a_;
};

/// Linear map on M_n as an n²×n² matrix acting on row-major vectorizations, optionally with the
/// Kraus operators and the Choi matrix it was built from.
struct SuperOp {
  Eigen::Index n = 0;
  CMatrix action;
  std::optional<std::vector<CMatrix>> kraus;
  std::optional<CMatrix> choi;  // C[(i,k),(j,l)] = Φ(E_ij)(k,l), row-major matrix units

  CMatrix apply(const CMatrix& x) const;
};

SuperOp superop_from_action(CMatrix action);
/// Φ(X) = Σ K X K†.
SuperOp superop_from_kraus(std::vector<CMatrix> kraus);
SuperOp superop_from_choi(CMatrix choi);
CMatrix choi_of(const CMatrix& action, Eigen::Index n);
CMatrix action_of_choi(const CMatrix& choi, Eigen::Index n);

SuperOp identity_map(Eigen::Index n);
SuperOp transpose_map(Eigen::Index n);
/// Φ(X) = tr(X)·I/n.
SuperOp trace_map(Eigen::Index n);
/// (a ∘ b)(X) = a(b(X)).
SuperOp compose(const SuperOp& a, const SuperOp& b);

/// Throws InvalidArgument when the stored representations disagree beyond `tol`.
void check_consistency(const SuperOp& phi, double tol = 1e-10);

/// Adjoint for the pairing tr(XY): tr(Φ(X)Y) = tr(XΦ*(Y)). The identity is re-checked on
/// seeded random X, Y; a mismatch above 1e-10 throws Error.
SuperOp adjoint_superop(const SuperOp& phi);

enum class PositivityLevel { CertifiedCp, SampledPositive, Falsified };
const char* to_string(PositivityLevel level);

struct PositivityVerdict {
  PositivityLevel level = PositivityLevel::SampledPositive;
  double choi_min_eigenvalue = 0.0;
  long trials = 0;
  std::optional<CVector> witness;  // v with Φ(vv†) not PSD
  double witness_min_eigenvalue = 0.0;
};

/// Choi PSD certifies complete positivity; otherwise Φ(vv†) is tested on the basis, on
/// (e_i ± e_j)/√2 and (e_i ± i e_j)/√2, and on `trials` seeded random unit vectors.
PositivityVerdict is_positive_map(const SuperOp& phi, long trials = 500, std::uint64_t seed = 0x5eed);

struct FixedState {
  double lambda = 0.0;
  CMatrix rho;  // PSD, trace one
  double residual = 0.0;  // ‖Φ*(ρ) - λρ‖_F
  double min_eigenvalue = 0.0;
  long iterations = 0;
  std::string method;  // "fixed_point" or "dense_fallback"
};

/// Positive eigenvector of Φ* by iterating ρ ← (ρ + Φ*(ρ))/tr(ρ + Φ*(ρ)) from I/n, with a
/// dense eigensolve of Φ* as fallback. Throws SolverError if no PSD eigenmatrix qualifies.
FixedState fixed_state(const SuperOp& phi, double tol = 1e-8, long max_iter = 20000);

struct UnitDominanceReport {
  bool holds = true;
  long trials = 0;
  double min_eigenvalue = 0.0;  // smallest eigenvalue of I - x seen
  std::optional<CMatrix> witness;

  explicit operator bool() const noexcept { return holds; }
};

/// I - x is PSD for seeded random Hermitian x with ‖x‖ <= 1 (including ±I and norm-one x).
UnitDominanceReport unit_dominates_sa_ball(Eigen::Index n, long trials, std::uint64_t seed);

/// t ↦ μ(t, x) for the standard trace: σ_i(x) on [i-1, i), 0 from n on.
class EigFunction {
 public:
  explicit EigFunction(Eigen::VectorXd values);  // sorted descending by the constructor

  const Eigen::VectorXd& values() const noexcept { return values_; }
  double at(double t) const;
  /// ∫₀^a μ(t, x) dt.
  double integral(double a) const;
  /// Σ_{j<=m} σ_j.
  double partial_sum(Eigen::Index m) const;

 private:
  Eigen::VectorXd values_;
};

EigFunction eig_function(const HermMatrix& x);
/// Singular values of an arbitrary complex matrix, descending.
Eigen::VectorXd singular_values(const CMatrix& x);

struct PinchReport {
  CMatrix pinched;
  Eigen::VectorXd sigma_x;
  Eigen::VectorXd sigma_pinched;
  double worst_margin = 0.0;  // min_m Σ_{j<=m} σ_j(x) - Σ_{j<=m} σ_j(Φ(x))
  bool holds = false;
};

/// Φ(x) = Σ P_i x P_i for the coordinate blocks of `partition` (zero-based index sets), and the
/// Ky Fan dominance Σ_{j<=m} σ_j(Φ(x)) <= Σ_{j<=m} σ_j(x) + 1e-10 for every m.
PinchReport pinch_majorization(const HermMatrix& x, const std::vector<std::vector<Eigen::Index>>& partition);

struct FacePsdResult {
  bool member = false;
  double spectral_value = 0.0;  // λ_max(P x P), the closed-form derivative
  double numeric = 0.0;         // dyadic descent on ‖e + αx‖_op
  CMatrix projector;            // spectral projector of e for the eigenvalue 1
};

/// x ∈ E = {x >= 0 : derivative of ‖·‖_op at e along x is 0}. Requires e PSD with ‖e‖ = 1 and
/// x PSD (InvalidArgument otherwise).
FacePsdResult face_psd(const HermMatrix& e, const HermMatrix& x, const Tolerances& tol = {});

}  // namespace krein
