#include "krein/norm.hpp"

#include "krein/errors.hpp"

#include <cmath>

namespace krein {

Norm Norm::weighted_sup(Eigen::VectorXd weights) {
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("weighted_sup: weights must be strictly positive and finite");
    }
  }
  Norm norm(Kind::WeightedSup);
  norm.weights_ = std::move(weights);
  return norm;
}

std::string Norm::name() const {
  switch (kind_) {
    case Kind::L1: return "l1";
    case Kind::Linf: return "linf";
    case Kind::WeightedSup: return "weighted_sup";
    case Kind::L2: return "l2";
  }
  return "?";
}

void Norm::check_dim(Eigen::Index n) const {
  if (kind_ == Kind::WeightedSup) require_dim(n, weights_.size(), "weighted_sup norm");
}

double Norm::operator()(const Eigen::VectorXd& x) const {
  check_dim(x.size());
  switch (kind_) {
    case Kind::L1: return x.lpNorm<1>();
    case Kind::Linf: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
    case Kind::WeightedSup:
      return x.size() == 0 ? 0.0 : x.cwiseAbs().cwiseQuotient(weights_).maxCoeff();
    case Kind::L2: return x.norm();
  }
  return 0.0;
}

long double Norm::eval_extended(const Eigen::VectorXd& e, double alpha,
                                const Eigen::VectorXd& x) const {
  check_dim(e.size());
  require_dim(x.size(), e.size(), "norm evaluation");
  const long double a = alpha;
  long double acc = 0.0L;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const long double v = std::fabs(static_cast<long double>(e[i]) + a * x[i]);
    switch (kind_) {
      case Kind::L1: acc += v; break;
      case Kind::Linf: acc = std::max(acc, v); break;
      case Kind::WeightedSup: acc = std::max(acc, v / weights_[i]); break;
      case Kind::L2: acc += v * v; break;
    }
  }
  return kind_ == Kind::L2 ? std::sqrt(acc) : acc;
}

double Norm::dual(const Eigen::VectorXd& f) const {
  check_dim(f.size());
  switch (kind_) {
    case Kind::L1: return f.size() == 0 ? 0.0 : f.lpNorm<Eigen::Infinity>();
    case Kind::Linf: return f.lpNorm<1>();
    case Kind::WeightedSup: return f.cwiseAbs().dot(weights_);
    case Kind::L2: return f.norm();
  }
  return 0.0;
}

double Norm::operator_norm(const Eigen::MatrixXd& t) const {
  require_dim(t.cols(), t.rows(), "operator_norm (square matrix)");
  check_dim(t.rows());
  if (t.size() == 0) return 0.0;
  switch (kind_) {
    case Kind::L1: return t.cwiseAbs().colwise().sum().maxCoeff();
    case Kind::Linf: return t.cwiseAbs().rowwise().sum().maxCoeff();
    case Kind::WeightedSup:
      return (t.cwiseAbs() * weights_).cwiseQuotient(weights_).maxCoeff();
    case Kind::L2: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
      return svd.singularValues()(0);
    }
  }
  return 0.0;
}

Eigen::VectorXd Norm::operator_norm_witness(const Eigen::MatrixXd& t) const {
  require_dim(t.cols(), t.rows(), "operator_norm_witness (square matrix)");
  check_dim(t.rows());
  const Eigen::Index n = t.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (n == 0) return x;
  Eigen::Index best = 0;
  switch (kind_) {
    case Kind::L1:
      t.cwiseAbs().colwise().sum().maxCoeff(&best);
      x[best] = 1.0;
      return x;
    case Kind::Linf:
    case Kind::WeightedSup: {
      Eigen::VectorXd w = kind_ == Kind::Linf ? Eigen::VectorXd::Ones(n) : weights_;
      (t.cwiseAbs() * w).cwiseQuotient(w).maxCoeff(&best);
      for (Eigen::Index j = 0; j < n; ++j) x[j] = (t(best, j) < 0.0 ? -1.0 : 1.0) * w[j];
      return x;
    }
    case Kind::L2: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullV);
      return svd.matrixV().col(0);
    }
  }
  return x;
}

}  // namespace krein
