#include "krein/random.hpp"

namespace krein {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::gaussian() { return normal_(engine_); }

Eigen::Index Rng::index(Eigen::Index n) {
  return std::uniform_int_distribution<Eigen::Index>(0, n - 1)(engine_);
}

bool Rng::coin(double p) { return uniform() < p; }

Eigen::VectorXd Rng::gaussian_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
  return v;
}

Eigen::VectorXd Rng::uniform_vector(Eigen::Index n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Eigen::VectorXd Rng::unit_vector(Eigen::Index n) {
  Eigen::VectorXd v = gaussian_vector(n);
  while (v.norm() == 0.0) v = gaussian_vector(n);
  return v / v.norm();
}

Eigen::VectorXd Rng::sign_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = coin() ? 1.0 : -1.0;
  return v;
}

Eigen::MatrixXd Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian();
  return m;
}

Eigen::MatrixXcd Rng::complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = gaussian();
      const double im = gaussian();
      m(i, j) = {re, im};
    }
  return m;
}

Eigen::VectorXcd Rng::complex_unit_vector(Eigen::Index n) {
  Eigen::VectorXcd v = complex_gaussian_matrix(n, 1).col(0);
  while (v.norm() == 0.0) v = complex_gaussian_matrix(n, 1).col(0);
  return v / v.norm();
}

}  // namespace krein
