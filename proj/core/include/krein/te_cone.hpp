#pragma once

#include "krein/cone.hpp"
#include "krein/lp.hpp"

#include <Eigen/Dense>

namespace krein {

/// Dual description of the cone K generated by the orthant and e - B:
/// K* = {f >= 0 : f(e) >= ‖f‖_*}. For polyhedral norms this is a polyhedral cone and
/// membership in K reduces to one small LP (bipolar theorem).
struct TeDual {
  Eigen::VectorXd e;
  Norm norm;
};

/// Requires e >= 0, e != 0, ‖e‖ = 1 within tol, and a polyhedral norm.
TeDual build_te_dual(const Eigen::VectorXd& e, const Norm& norm, const Tolerances& tol = {});

struct TeMembership {
  bool member = false;
  double optimum = 0.0;        // min f(x) over f ∈ K*, Σf = 1
  Eigen::VectorXd functional;  // the minimizing f; separates x from K when !member
  lp::Status status = lp::Status::Optimal;
};

TeMembership te_membership(const Eigen::VectorXd& x, const TeDual& dual,
                           const Tolerances& tol = {});

bool te_dual_contains(const TeDual& dual, const Eigen::VectorXd& f, const Tolerances& tol = {});

}  // namespace krein
