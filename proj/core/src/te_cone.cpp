#include "krein/te_cone.hpp"

#include "krein/errors.hpp"

#include <cmath>

namespace krein {

TeDual build_te_dual(const Eigen::VectorXd& e, const Norm& norm, const Tolerances& tol) {
  tol.validate();
  if (!norm.polyhedral()) {
    throw InvalidArgument("te cone: the dual of an l2 shifted cone is not polyhedral; use l1, linf or weighted_sup");
  }
  if (norm.kind() == Norm::Kind::WeightedSup) require_dim(e.size(), norm.weights().size(), "te cone");
  if (e.size() == 0 || (e.array() < 0.0).any() || e.isZero(0.0)) {
    throw InvalidArgument("te cone: e must be nonnegative and nonzero");
  }
  if (std::abs(norm(e) - 1.0) > tol.membership_tol) {
    throw InvalidArgument("te cone: e must have norm 1");
  }
  return TeDual{e, norm};
}

TeMembership te_membership(const Eigen::VectorXd& x, const TeDual& dual, const Tolerances& tol) {
  const Eigen::Index n = dual.e.size();
  require_dim(x.size(), n, "te_membership");
  const bool l1 = dual.norm.kind() == Norm::Kind::L1;
  // Variables: f (n, >= 0) and, for the l1 norm, t >= max_i f_i.
  lp::LinearProgram prog(l1 ? n + 1 : n);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(prog.num_vars());
  cost.head(n) = x;
  prog.set_objective(cost);

  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(prog.num_vars());
  row.head(n).setOnes();
  prog.add_constraint(row, lp::Relation::Equal, 1.0);

  switch (dual.norm.kind()) {
    case Norm::Kind::Linf:
      row.setZero();
      row.head(n) = (dual.e.array() - 1.0).matrix().transpose();
      prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
      break;
    case Norm::Kind::WeightedSup:
      row.setZero();
      row.head(n) = (dual.e - dual.norm.weights()).transpose();
      prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
      break;
    case Norm::Kind::L1:
      for (Eigen::Index i = 0; i < n; ++i) {
        row.setZero();
        row[n] = 1.0;
        row[i] = -1.0;
        prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
      }
      row.setZero();
      row.head(n) = dual.e.transpose();
      row[n] = -1.0;
      prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
      break;
    case Norm::Kind::L2:
      throw InvalidArgument("te_membership: l2 norm unsupported");
  }

  const lp::Result res = prog.solve();
  TeMembership out;
  out.status = res.status;
  if (res.status == lp::Status::Infeasible) {
    // K* = {0}: K is the whole space.
    out.member = true;
    out.functional = Eigen::VectorXd::Zero(n);
    return out;
  }
  if (res.status != lp::Status::Optimal) {
    throw SolverError(std::string("te_membership: LP ended with status ") + lp::to_string(res.status));
  }
  out.optimum = res.objective;
  out.functional = res.x.head(n);
  const double scale = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  out.member = out.optimum >= -tol.membership_tol * std::max(scale, 1e-300);
  return out;
}

bool te_dual_contains(const TeDual& dual, const Eigen::VectorXd& f, const Tolerances& tol) {
  require_dim(f.size(), dual.e.size(), "te_dual_contains");
  const double slack = tol.membership_tol * std::max(dual.norm.dual(f), 1e-300);
  if ((f.array() < -slack).any()) return false;
  return f.dot(dual.e) >= dual.norm.dual(f) - slack;
}

}  // namespace krein
