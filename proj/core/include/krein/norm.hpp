#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>

namespace krein {

/// Norm attached to the ambient coordinate space.
///
/// WeightedSup(w) is ‖x‖ = max_i |x_i| / w_i, the finite-dimensional AM-space renorming
/// in which the weight vector w itself is a unit dominating the ball.
class Norm {
 public:
  enum class Kind { L1, Linf, WeightedSup, L2 };

  static Norm l1() { return Norm(Kind::L1); }
  static Norm linf() { return Norm(Kind::Linf); }
  static Norm l2() { return Norm(Kind::L2); }
  static Norm weighted_sup(Eigen::VectorXd weights);

  Kind kind() const noexcept { return kind_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  std::string name() const;

  double operator()(const Eigen::VectorXd& x) const;
  /// Same norm evaluated in extended precision.
  long double eval_extended(const Eigen::VectorXd& e, double alpha, const Eigen::VectorXd& x) const;
  /// The dual norm ‖f‖_* = sup_{‖x‖≤1} f(x).
  double dual(const Eigen::VectorXd& f) const;
  /// Operator norm of T induced by this norm on both sides. L2 uses the largest singular value.
  double operator_norm(const Eigen::MatrixXd& t) const;
  /// A vector x with ‖x‖ = 1 attaining ‖Tx‖ = operator_norm(T) (exact for L1/Linf/WeightedSup).
  Eigen::VectorXd operator_norm_witness(const Eigen::MatrixXd& t) const;

  /// True when the unit ball is a polytope (finitely many extreme points).
  bool polyhedral() const noexcept { return kind_ != Kind::L2; }

 private:
  explicit Norm(Kind kind) : kind_(kind) {}
  void check_dim(Eigen::Index n) const;

  Kind kind_;
  Eigen::VectorXd weights_;
};

}  // namespace krein
