#pragma once

#include "krein/cone.hpp"
#include "krein/matrix_order.hpp"
#include "krein/norm.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace krein::oracle {

/// One eigenvalue cluster of Tᵀ. Real clusters carry an orthonormal basis of the eigenspace.
struct EigenCluster {
  std::complex<double> lambda;
  bool real = true;
  int multiplicity = 1;     // algebraic
  Eigen::MatrixXd basis;    // empty for complex clusters
  double residual = 0.0;    // max ‖Tᵀv - λv‖ over basis columns
};

/// Dense eigendecomposition of Tᵀ (n <= 64), clusters sorted by decreasing real part.
/// Throws SolverError when the eigensolver does not converge.
std::vector<EigenCluster> dense_dual_eigs(const Eigen::MatrixXd& t);

struct OracleEigenpair {
  double lambda = 0.0;
  Eigen::VectorXd h;  // in the dual cone, h(e) = 1
  double residual = 0.0;
};

/// Largest real eigenvalue of Tᵀ having an eigenvector in the dual cone, normalized at e.
std::optional<OracleEigenpair> dual_cone_eigenpair(const Eigen::MatrixXd& t, const Cone& cone,
                                                   const Eigen::VectorXd& e,
                                                   const Tolerances& tol = {});

enum class Family {
  NonnegOrthant,
  L1KreinViaPerturbation,
  TeContraction,
  CommutingPair,
  PositiveMapKraus,
  PositiveMapTransposeComposed,
};
const char* to_string(Family family);
Family family_from_string(const std::string& name);  // throws InvalidArgument

struct InstanceSpec {
  Family family = Family::NonnegOrthant;
  Eigen::Index n = 3;
  std::uint64_t seed = 0;
};

struct Instance {
  InstanceSpec spec;
  std::vector<Eigen::MatrixXd> matrices;  // one, or {T, T² + T} for commuting pairs
  Cone cone = make_orthant(1);
  Eigen::VectorXd e;
  Norm norm = Norm::linf();
  std::optional<SuperOp> map;  // positive-map families
  double perturbation_norm = 0.0;  // ‖R‖ for the ℓ1 family
  int attempts = 1;
};

/// Largest n accepted per family.
Eigen::Index family_cap(Family family);

/// Deterministic in (family, n, seed). Each instance is re-checked against its family's
/// preconditions; after 16 rejected draws an Error names the failing predicate.
Instance generate(const InstanceSpec& spec);

struct TrialRecord {
  long index = 0;
  std::uint64_t seed = 0;
  bool agree = false;
  double lambda_solver = 0.0;
  double lambda_oracle = 0.0;
  double relative_error = 0.0;
  double residual = 0.0;
  std::string note;
};

struct DifferentialSummary {
  Family family = Family::NonnegOrthant;
  Eigen::Index n = 0;
  long trials = 0;
  long agreements = 0;
  double worst_relative_error = 0.0;
  double worst_residual = 0.0;
  std::vector<TrialRecord> failures;
  std::vector<TrialRecord> records;  // every trial, only when verbose

  /// Associative merge of summaries of disjoint trial ranges.
  void merge(const DifferentialSummary& other);
};

/// Runs the family's solver and the dense oracle on `trials` instances with per-trial seeds
/// derive_seed(seed, i), comparing λ (relative 1e-6) and residuals (1e-8).
DifferentialSummary differential_run(Family family, Eigen::Index n, long trials, std::uint64_t seed,
                                     bool verbose = false);

/// A single trial, so callers can distribute trials themselves.
TrialRecord run_trial(Family family, Eigen::Index n, long index, std::uint64_t master_seed);

}  // namespace krein::oracle
