#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace krein {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix/cone sizes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments that are not a size mismatch (bad tolerance, bad partition, e = 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A mathematical hypothesis of a theorem failed. Carries a concrete witness where one exists.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& what,
                           std::optional<Eigen::VectorXd> witness = std::nullopt)
      : Error(what), witness_(std::move(witness)) {}

  const std::optional<Eigen::VectorXd>& witness() const noexcept { return witness_; }

 private:
  std::optional<Eigen::VectorXd> witness_;
};

/// A numerical routine failed to produce a certified answer.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what, double best_residual = -1.0)
      : Error(what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace krein
