#pragma once

#include "krein/cone.hpp"

#include <Eigen/Dense>

#include <optional>

namespace krein {

/// Finite n×n truncation of a matrix acting on ℓ1, t_ij = e_i*(T e_j).
class L1Matrix {
 public:
  explicit L1Matrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  /// ℓ1 → ℓ1 operator norm: the largest absolute column sum.
  double norm() const noexcept { return norm_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
  double norm_;
};

/// One comparison t_kk + sign·t_kj >= Σ_{i≠k} |t_ik + sign·t_ij|. Indices are zero-based.
struct CriterionWitness {
  Eigen::Index k = 0;
  Eigen::Index j = 0;
  int sign = 1;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// The comparison with the smallest margin lhs - rhs over j ≠ k and both signs. For n = 1 the
/// only requirement is t_kk >= 0, reported with j = k.
CriterionWitness worst_comparison(const L1Matrix& m, Eigen::Index k);

/// First failing comparison in (j, sign) order, or nullopt when the criterion holds at k.
std::optional<CriterionWitness> criterion_violation(const L1Matrix& m, Eigen::Index k,
                                                    double tol = 1e-9);

bool satisfies_tkk(const L1Matrix& m, Eigen::Index k, double tol = 1e-9);

/// Smallest k satisfying the criterion.
std::optional<Eigen::Index> find_certificate_index(const L1Matrix& m, double tol = 1e-9);

/// Re-checks M(e_k ± e_j) ∈ L1Krein(n, k) for every j ≠ k. Throws HypothesisError naming the
/// failing (j, sign) when the criterion itself does not hold at k.
bool criterion_implies_invariance(const L1Matrix& m, Eigen::Index k, double tol = 1e-9);

/// The matrix with a single 1 in the top-left corner.
L1Matrix corner_unit(Eigen::Index n);

struct PerturbationReport {
  bool holds = false;
  double r_norm = 0.0;
  double lhs_min = 0.0;  // min over j, signs of t_11 ± t_1j; at least 1 - 2‖R‖ > 3/5
  double rhs_max = 0.0;  // max of Σ_{i≠1} |t_i1 ± t_ij|; at most 2‖R‖ < 2/5
  double lhs_bound = 0.0;
  double rhs_bound = 0.0;
};

/// Criterion at k = 0 for corner_unit(n) + R. Throws InvalidArgument unless ‖R‖ < 1/5.
PerturbationReport interior_perturbation(const L1Matrix& r, double tol = 1e-9);

}  // namespace krein
