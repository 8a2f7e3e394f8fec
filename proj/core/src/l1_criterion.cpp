#include "krein/l1_criterion.hpp"

#include "krein/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace krein {

L1Matrix::L1Matrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionError("L1Matrix: matrix must be square, got " + std::to_string(entries_.rows()) +
                         "x" + std::to_string(entries_.cols()));
  }
  if (entries_.size() == 0) throw InvalidArgument("L1Matrix: empty matrix");
  if (!entries_.allFinite()) throw InvalidArgument("L1Matrix: non-finite entry");
  norm_ = entries_.cwiseAbs().colwise().sum().maxCoeff();
}

namespace {

void check_index(const L1Matrix& m, Eigen::Index k) {
  if (k < 0 || k >= m.size()) {
    throw InvalidArgument("criterion index " + std::to_string(k + 1) + " outside 1.." +
                          std::to_string(m.size()));
  }
}

CriterionWitness compare(const L1Matrix& m, Eigen::Index k, Eigen::Index j, int sign) {
  const Eigen::MatrixXd& t = m.entries();
  CriterionWitness w{k, j, sign, t(k, k) + sign * t(k, j), 0.0};
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (i != k) w.rhs += std::abs(t(i, k) + sign * t(i, j));
  }
  return w;
}

}  // namespace

CriterionWitness worst_comparison(const L1Matrix& m, Eigen::Index k) {
  check_index(m, k);
  if (m.size() == 1) return CriterionWitness{k, k, 1, m(k, k), 0.0};
  CriterionWitness worst;
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < m.size(); ++j) {
    if (j == k) continue;
    for (int sign : {1, -1}) {
      const CriterionWitness w = compare(m, k, j, sign);
      if (w.lhs - w.rhs < margin) {
        margin = w.lhs - w.rhs;
        worst = w;
      }
    }
  }
  return worst;
}

std::optional<CriterionWitness> criterion_violation(const L1Matrix& m, Eigen::Index k, double tol) {
  check_index(m, k);
  if (m.size() == 1) {
    if (m(k, k) + tol < 0.0) return CriterionWitness{k, k, 1, m(k, k), 0.0};
    return std::nullopt;
  }
  for (Eigen::Index j = 0; j < m.size(); ++j) {
    if (j == k) continue;
    for (int sign : {1, -1}) {
      const CriterionWitness w = compare(m, k, j, sign);
      if (w.lhs + tol < w.rhs) return w;
    }
  }
  return std::nullopt;
}

bool satisfies_tkk(const L1Matrix& m, Eigen::Index k, double tol) {
  return !criterion_violation(m, k, tol).has_value();
}

std::optional<Eigen::Index> find_certificate_index(const L1Matrix& m, double tol) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (satisfies_tkk(m, k, tol)) return k;
  }
  return std::nullopt;
}

bool criterion_implies_invariance(const L1Matrix& m, Eigen::Index k, double tol) {
  if (auto v = criterion_violation(m, k, tol)) {
    std::ostringstream msg;
    msg << "criterion fails at k=" << k + 1 << ", j=" << v->j + 1 << ", sign=" << (v->sign > 0 ? '+' : '-')
        << ": " << v->lhs << " < " << v->rhs;
    throw HypothesisError(msg.str());
  }
  const Eigen::Index n = m.size();
  // Same additive slack as the criterion: x_k + tol >= Σ_{i≠k} |x_i|.
  const auto in_cone = [&](const Eigen::VectorXd& x) {
    double rest = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != k) rest += std::abs(x[i]);
    }
    return x[k] + tol >= rest;
  };
  if (n == 1) return in_cone(m.entries().col(0));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == k) continue;
    for (int sign : {1, -1}) {
      const Eigen::VectorXd g = Eigen::VectorXd::Unit(n, k) + sign * Eigen::VectorXd::Unit(n, j);
      if (!in_cone(m.entries() * g)) return false;
    }
  }
  return true;
}

L1Matrix corner_unit(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("corner_unit: n must be positive");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  s(0, 0) = 1.0;
  return L1Matrix(s);
}

PerturbationReport interior_perturbation(const L1Matrix& r, double tol) {
  PerturbationReport out;
  out.r_norm = r.norm();
  if (!(out.r_norm < 0.2)) {
    std::ostringstream msg;
    msg << "interior_perturbation: ‖R‖ = " << out.r_norm << " is not below 1/5";
    throw InvalidArgument(msg.str());
  }
  const Eigen::Index n = r.size();
  const L1Matrix t(corner_unit(n).entries() + r.entries());
  out.lhs_bound = 1.0 - 2.0 * out.r_norm;
  out.rhs_bound = 2.0 * out.r_norm;
  out.lhs_min = std::numeric_limits<double>::infinity();
  out.rhs_max = 0.0;
  if (n == 1) {
    out.lhs_min = t(0, 0);
  }
  for (Eigen::Index j = 1; j < n; ++j) {
    for (int sign : {1, -1}) {
      const CriterionWitness w = compare(t, 0, j, sign);
      out.lhs_min = std::min(out.lhs_min, w.lhs);
      out.rhs_max = std::max(out.rhs_max, w.rhs);
    }
  }
  out.holds = satisfies_tkk(t, 0, tol);
  return out;
}

}  // namespace krein
