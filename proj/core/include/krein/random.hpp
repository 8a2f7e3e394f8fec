#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

namespace krein {

/// Per-trial seed derivation (splitmix64 finalizer over master ⊕ index), so trials can run in
/// any order or in parallel and still see the same stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double gaussian();
  Eigen::Index index(Eigen::Index n);  // uniform in [0, n)
  bool coin(double p = 0.5);

  Eigen::VectorXd gaussian_vector(Eigen::Index n);
  Eigen::VectorXd uniform_vector(Eigen::Index n, double lo = 0.0, double hi = 1.0);
  Eigen::VectorXd unit_vector(Eigen::Index n);  // uniform on the Euclidean sphere
  Eigen::VectorXd sign_vector(Eigen::Index n);
  Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
  Eigen::MatrixXcd complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
  Eigen::VectorXcd complex_unit_vector(Eigen::Index n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace krein
