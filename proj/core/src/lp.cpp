#include "krein/lp.hpp"

#include "krein/errors.hpp"

#include <cmath>
#include <limits>

namespace krein::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration_limit";
  }
  return "?";
}

LinearProgram::LinearProgram(Eigen::Index num_vars)
    : num_vars_(num_vars), free_(static_cast<size_t>(num_vars), false),
      cost_(Eigen::VectorXd::Zero(num_vars)) {}

void LinearProgram::set_free(Eigen::Index var) {
  if (var < 0 || var >= num_vars_) throw InvalidArgument("lp: variable index out of range");
  free_[static_cast<size_t>(var)] = true;
}

void LinearProgram::set_objective(const Eigen::VectorXd& cost) {
  require_dim(cost.size(), num_vars_, "lp objective");
  cost_ = cost;
}

void LinearProgram::add_constraint(const Eigen::RowVectorXd& coeffs, Relation rel, double rhs) {
  require_dim(coeffs.size(), num_vars_, "lp constraint");
  rows_.push_back({coeffs, rel, rhs});
}

namespace {

// Dense tableau. Row m holds reduced costs; column `rhs` holds basic values and -z.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<Eigen::Index> basis;
  std::vector<bool> enterable;
  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index cols() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<size_t>(r)] = c;
  }

  void set_costs(const Eigen::VectorXd& cost) {
    const Eigen::Index m = rows();
    t.row(m).setZero();
    t.row(m).head(cols()) = cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost[basis[static_cast<size_t>(i)]];
      if (cb != 0.0) t.row(m) -= cb * t.row(i);
    }
  }

  // Bland's rule: lowest-index improving column, lowest-index basic variable among ties.
  Status iterate(const Options& opt, long& pivots) {
    const Eigen::Index m = rows();
    const Eigen::Index rhs = cols();
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (enterable[static_cast<size_t>(j)] && t(m, j) < -opt.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::Optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a <= opt.pivot_tol) continue;
        const double ratio = std::max(t(i, rhs), 0.0) / a;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 &&
             basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Status::Unbounded;
      if (++pivots > opt.max_pivots) return Status::IterationLimit;
      pivot(leave, enter);
    }
  }
};

}  // namespace

Result LinearProgram::solve(const Options& opt) const {
  // Column layout: one column per nonnegative variable, two per free variable,
  // then one slack per inequality, then one artificial per row.
  std::vector<Eigen::Index> plus(static_cast<size_t>(num_vars_)), minus(static_cast<size_t>(num_vars_), -1);
  Eigen::Index ncols = 0;
  for (Eigen::Index j = 0; j < num_vars_; ++j) {
    plus[static_cast<size_t>(j)] = ncols++;
    if (free_[static_cast<size_t>(j)]) minus[static_cast<size_t>(j)] = ncols++;
  }

  const auto m = static_cast<Eigen::Index>(rows_.size());
  std::vector<Eigen::Index> slack(rows_.size(), -1);
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].rel != Relation::Equal) slack[i] = ncols++;
  }
  const Eigen::Index first_artificial = ncols;
  ncols += m;

  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m + 1, ncols + 1);
  tab.basis.resize(static_cast<size_t>(m));
  tab.enterable.assign(static_cast<size_t>(ncols), true);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Row& row = rows_[static_cast<size_t>(i)];
    const double scale = std::max(row.coeffs.cwiseAbs().maxCoeff(), std::abs(row.rhs));
    const double s = scale > 0.0 ? 1.0 / scale : 1.0;
    for (Eigen::Index j = 0; j < num_vars_; ++j) {
      tab.t(i, plus[static_cast<size_t>(j)]) = s * row.coeffs[j];
      if (minus[static_cast<size_t>(j)] >= 0) tab.t(i, minus[static_cast<size_t>(j)]) = -s * row.coeffs[j];
    }
    if (slack[static_cast<size_t>(i)] >= 0) {
      tab.t(i, slack[static_cast<size_t>(i)]) = row.rel == Relation::LessEqual ? 1.0 : -1.0;
    }
    tab.t(i, ncols) = s * row.rhs;
    if (tab.t(i, ncols) < 0.0) tab.t.row(i) *= -1.0;
    tab.t(i, first_artificial + i) = 1.0;
    tab.basis[static_cast<size_t>(i)] = first_artificial + i;
  }

  Result result;
  result.x = Eigen::VectorXd::Zero(num_vars_);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(ncols);
  phase1.tail(m).setOnes();
  tab.set_costs(phase1);
  Status st = tab.iterate(opt, result.pivots);
  if (st == Status::IterationLimit) {
    result.status = st;
    return result;
  }
  if (-tab.t(m, ncols) > opt.feasibility_tol) {
    result.status = Status::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows where that is impossible are redundant.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<size_t>(i)] < first_artificial) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < first_artificial; ++j) {
      if (std::abs(tab.t(i, j)) > opt.pivot_tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
      keep.push_back(i);
    }
  }
  if (static_cast<Eigen::Index>(keep.size()) < m) {
    Tableau reduced;
    reduced.t.resize(static_cast<Eigen::Index>(keep.size()) + 1, ncols + 1);
    for (size_t k = 0; k < keep.size(); ++k) {
      reduced.t.row(static_cast<Eigen::Index>(k)) = tab.t.row(keep[k]);
      reduced.basis.push_back(tab.basis[static_cast<size_t>(keep[k])]);
    }
    reduced.t.row(reduced.t.rows() - 1).setZero();
    reduced.enterable = tab.enterable;
    tab = std::move(reduced);
  }
  for (Eigen::Index j = first_artificial; j < ncols; ++j) tab.enterable[static_cast<size_t>(j)] = false;

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(ncols);
  for (Eigen::Index j = 0; j < num_vars_; ++j) {
    phase2[plus[static_cast<size_t>(j)]] = cost_[j];
    if (minus[static_cast<size_t>(j)] >= 0) phase2[minus[static_cast<size_t>(j)]] = -cost_[j];
  }
  tab.set_costs(phase2);
  st = tab.iterate(opt, result.pivots);
  result.status = st;

  Eigen::VectorXd values = Eigen::VectorXd::Zero(ncols);
  for (Eigen::Index i = 0; i < tab.rows(); ++i) {
    values[tab.basis[static_cast<size_t>(i)]] = tab.t(i, tab.cols());
  }
  for (Eigen::Index j = 0; j < num_vars_; ++j) {
    result.x[j] = values[plus[static_cast<size_t>(j)]];
    if (minus[static_cast<size_t>(j)] >= 0) result.x[j] -= values[minus[static_cast<size_t>(j)]];
  }
  result.objective = cost_.dot(result.x);
  return result;
}

}  // namespace krein::lp
