#pragma once

#include "krein/norm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace krein {

struct Tolerances {
  double membership_tol = 1e-9;  // relative: scaled by ‖x‖ in membership tests
  double residual_tol = 1e-8;
  double alpha_probe = 1e-7;  // initial step of the directional-derivative descent

  void validate() const;
};

namespace cones {

/// Nonnegative orthant of R^n.
struct Orthant {
  Eigen::Index n;
};

/// {x : x_k >= Σ_{i≠k} |x_i|}, the cone spanned by e_k + (unit ℓ1 ball). k is zero-based.
struct L1Krein {
  Eigen::Index n;
  Eigen::Index k;
};

/// Conic hull of the columns of `generators`.
struct Polyhedral {
  Eigen::MatrixXd generators;
};

/// {α(e + x) : α >= 0, ‖x‖ <= 1}.
struct ShiftedBall {
  Eigen::VectorXd e;
  Norm norm;
};

/// Closed cone generated by the orthant and e - (unit ball).
struct TeCone {
  Eigen::VectorXd e;
  Norm norm;
};

/// Real symmetric PSD matrices of order `order`, stored row-major in R^{order²}.
struct Psd {
  Eigen::Index order;
};

}  // namespace cones

using Cone = std::variant<cones::Orthant, cones::L1Krein, cones::Polyhedral, cones::ShiftedBall,
                          cones::TeCone, cones::Psd>;

Cone make_orthant(Eigen::Index n);
Cone make_l1_krein(Eigen::Index n, Eigen::Index k);
Cone make_polyhedral(Eigen::MatrixXd generators);
Cone make_shifted_ball(Eigen::VectorXd e, Norm norm);
/// Requires e >= 0, e != 0, ‖e‖ = 1 within tol, and a polyhedral norm (the dual is an LP).
Cone make_te_cone(Eigen::VectorXd e, Norm norm, const Tolerances& tol = {});
Cone make_psd(Eigen::Index order);

Eigen::Index dim(const Cone& cone);
std::string kind_name(const Cone& cone);

bool contains(const Cone& cone, const Eigen::VectorXd& x, const Tolerances& tol = {});
bool dual_contains(const Cone& cone, const Eigen::VectorXd& f, const Tolerances& tol = {});

/// Outcome of a check that is exact on finitely many generators and sampled otherwise.
struct Verdict {
  bool holds = true;
  bool exhaustive = true;  // false: decided on random probes only
  long probes = 0;
  std::optional<Eigen::VectorXd> witness;  // offending generator/probe when !holds

  explicit operator bool() const noexcept { return holds; }
};

/// Largest n for which the 2^n vertices of the sup-norm ball are enumerated.
inline constexpr Eigen::Index kMaxEnumeratedSupDim = 20;

/// Extreme points of the unit ball as columns, or nullopt when not enumerable.
std::optional<Eigen::MatrixXd> ball_extreme_points(const Norm& norm, Eigen::Index n);

/// Extreme directions (as columns) generating the cone, when finitely many and enumerable.
std::optional<Eigen::MatrixXd> cone_generators(const Cone& cone);

/// Does e dominate the unit ball, i.e. e - x ∈ cone for every ‖x‖ <= 1?
/// Throws InvalidArgument when ‖e‖ differs from 1 by more than tol.membership_tol.
Verdict dominates_ball(const Cone& cone, const Norm& norm, const Eigen::VectorXd& e,
                       const Tolerances& tol = {}, long probes = 2000,
                       std::uint64_t seed = 0x5eed);

/// T(cone) ⊆ cone, exact on generators where available.
Verdict positivity_preserved(const Eigen::MatrixXd& t, const Cone& cone, const Tolerances& tol = {},
                             long probes = 2000, std::uint64_t seed = 0x5eed);

/// K ∩ -K = {0}. Wedges are legal cones here; this is a diagnostic only.
bool is_proper(const Cone& cone, const Tolerances& tol = {});

// ---- shifted-ball machinery ------------------------------------------------------------

/// Minimizer of g(α) = ‖x - αe‖ - α over α >= 0. x belongs to the shifted-ball cone iff
/// `gap` <= 0 (up to tolerance). `alpha` is infinite when g is unbounded below.
struct ScaleFit {
  double alpha = 0.0;
  double gap = 0.0;
};
ScaleFit shifted_ball_fit(const Eigen::VectorXd& e, const Norm& norm, const Eigen::VectorXd& x);

/// Minkowski gauge of W = (C0 - e) ∩ (e - C0), C0 the cone over e + B. Requires ‖e‖ > 1.
double w_gauge(const Eigen::VectorXd& e, const Norm& norm, const Eigen::VectorXd& x,
               const Tolerances& tol = {});

/// lower·‖x‖ <= w_gauge(x) <= upper·‖x‖.
struct GaugeBounds {
  double lower;
  double upper;
  double coefficient_bound;  // max{2, 2‖e‖/(‖e‖-1)} bounds α1 + α2 in w = α1(e+x1) - e = e - α2(e+x2)
};
GaugeBounds w_gauge_bounds(const Eigen::VectorXd& e, const Norm& norm);

// ---- dual cone as linear constraints ---------------------------------------------------

/// f ∈ K* iff there are aux >= 0 with rows · [f; aux] >= 0. Available for every cone whose
/// dual is polyhedral (everything except Psd and the L2 shifted ball).
struct LinearDual {
  Eigen::MatrixXd rows;
  Eigen::Index aux = 0;
};
std::optional<LinearDual> linear_dual(const Cone& cone);

/// A point f = basis·c of the dual cone with f(e) = 1, chosen to maximize the margin of the
/// dual constraints. nullopt when no such point exists (or the dual is not polyhedral).
std::optional<Eigen::VectorXd> find_dual_point(const Cone& cone, const Eigen::VectorXd& e,
                                               const Eigen::MatrixXd& basis,
                                               const Tolerances& tol = {});

}  // namespace krein
