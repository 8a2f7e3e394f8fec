#pragma once

#include <Eigen/Dense>

#include <vector>

namespace krein::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status status);

struct Options {
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;
  long max_pivots = 100000;
};

struct Result {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;  // in the caller's variables
  long pivots = 0;
};

/// Small dense linear program: minimize c·x subject to row constraints, x_j >= 0 unless
/// marked free. Solved by a two-phase tableau simplex with Bland's rule, so it terminates
/// on degenerate problems. Intended for tens of variables, not thousands.
class LinearProgram {
 public:
  explicit LinearProgram(Eigen::Index num_vars);

  Eigen::Index num_vars() const noexcept { return num_vars_; }
  void set_free(Eigen::Index var);
  void set_objective(const Eigen::VectorXd& cost);
  void add_constraint(const Eigen::RowVectorXd& coeffs, Relation rel, double rhs);

  Result solve(const Options& options = {}) const;

 private:
  struct Row {
    Eigen::RowVectorXd coeffs;
    Relation rel;
    double rhs;
  };

  Eigen::Index num_vars_;
  std::vector<bool> free_;
  Eigen::VectorXd cost_;
  std::vector<Row> rows_;
};

}  // namespace krein::lp
