#include "krein/krein_solver.hpp"

#include "krein/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace krein {

const char* to_string(Method method) {
  return method == Method::FixedPoint ? "fixed_point" : "dense_fallback";
}

PositiveOperator make_positive_operator(Eigen::MatrixXd matrix, Cone cone, Eigen::VectorXd e,
                                        Norm norm, const Tolerances& tol, bool assume_hypotheses) {
  tol.validate();
  const Eigen::Index n = dim(cone);
  require_dim(matrix.rows(), n, "positive operator (rows)");
  require_dim(matrix.cols(), n, "positive operator (cols)");
  require_dim(e.size(), n, "positive operator (e)");
  PositiveOperator op{std::move(matrix), std::move(cone), std::move(e), std::move(norm)};
  if (assume_hypotheses) {
    op.hypotheses_assumed = true;
    return op;
  }
  const Verdict pos = positivity_preserved(op.matrix, op.cone, tol);
  if (!pos) {
    throw HypothesisError("operator does not preserve the " + kind_name(op.cone) +
                              " cone: the witness generator is mapped outside it",
                          pos.witness);
  }
  op.positivity_exhaustive = pos.exhaustive;
  const Verdict dom = dominates_ball(op.cone, op.norm, op.e, tol);
  if (!dom) {
    throw HypothesisError("e does not dominate the unit ball: e - witness lies outside the cone",
                          dom.witness);
  }
  op.dominance_exhaustive = dom.exhaustive;
  return op;
}

double dual_residual(const Eigen::MatrixXd& t, const Eigen::VectorXd& h, const Eigen::VectorXd& e) {
  const Eigen::VectorXd g = t.transpose() * h;
  const double lambda = g.dot(e);
  return (g - lambda * h).lpNorm<Eigen::Infinity>();
}

namespace {

Eigen::VectorXd norming_functional(const Eigen::VectorXd& c, const Norm& norm) {
  const Eigen::Index n = c.size();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  const auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  switch (norm.kind()) {
    case Norm::Kind::Linf:
    case Norm::Kind::WeightedSup: {
      const Eigen::VectorXd w =
          norm.kind() == Norm::Kind::Linf ? Eigen::VectorXd::Ones(n) : norm.weights();
      const Eigen::VectorXd r = c.cwiseAbs().cwiseQuotient(w);
      const double top = r.maxCoeff();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (r[i] >= top * (1.0 - 1e-12)) f[i] = sgn(c[i]) / w[i];
      }
      return f;
    }
    case Norm::Kind::L1:
      for (Eigen::Index i = 0; i < n; ++i) f[i] = sgn(c[i]);
      return f;
    case Norm::Kind::L2:
      return c;
  }
  return f;
}

Eigen::VectorXd central_functional(const PositiveOperator& op, const Tolerances& tol) {
  const Eigen::Index n = dim(op.cone);
  if (const auto* c = std::get_if<cones::L1Krein>(&op.cone)) return Eigen::VectorXd::Unit(n, c->k);
  if (const auto* c = std::get_if<cones::ShiftedBall>(&op.cone)) return norming_functional(c->e, c->norm);
  if (const auto* c = std::get_if<cones::TeCone>(&op.cone)) return norming_functional(c->e, c->norm);
  if (const auto* c = std::get_if<cones::Psd>(&op.cone)) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(c->order, c->order);
    return Eigen::Map<const Eigen::VectorXd>(id.data(), n);
  }
  if (auto f = find_dual_point(op.cone, op.e, Eigen::MatrixXd::Identity(n, n), tol)) return *f;
  return Eigen::VectorXd::Zero(n);
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Orthonormal basis of the numerical kernel of A (columns).
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& a, double rel_tol, Eigen::VectorXd* sv = nullptr) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (sv) *sv = s;
  const Eigen::Index n = a.cols();
  const double thresh = rel_tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > thresh) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

struct Candidate {
  double lambda;
  Eigen::VectorXd h;
  double residual;
};

// Dual-cone eigenvectors of Tᵀ inside span(basis) with the given approximate eigenvalue.
std::vector<Candidate> candidates_in_span(const PositiveOperator& op, const Eigen::MatrixXd& basis,
                                          const Tolerances& tol) {
  std::vector<Candidate> out;
  const auto accept = [&](Eigen::VectorXd v) {
    const double ve = v.dot(op.e);
    if (!(std::abs(ve) > 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff()))) return;
    v /= ve;
    if (!dual_contains(op.cone, v, tol)) return;
    const double res = dual_residual(op.matrix, v, op.e);
    out.push_back({(op.matrix.transpose() * v).dot(op.e), v, res});
  };
  if (basis.cols() == 0) return out;
  if (basis.cols() == 1) {
    accept(basis.col(0));
    return out;
  }
  if (auto f = find_dual_point(op.cone, op.e, basis, tol)) {
    accept(*f);
  } else {
    for (Eigen::Index j = 0; j < basis.cols(); ++j) accept(basis.col(j));
    accept(basis.rowwise().sum());
  }
  return out;
}

DualEigenpair dense_fallback(const PositiveOperator& op, const Tolerances& tol, long iterations) {
  const Eigen::MatrixXd tt = op.matrix.transpose();
  const Eigen::Index n = tt.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(tt, false);
  if (es.info() != Eigen::Success) throw SolverError("dense fallback: eigensolver did not converge");
  const double scale = std::max(1.0, tt.cwiseAbs().maxCoeff());

  std::vector<double> reals;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> mu = es.eigenvalues()(i);
    if (std::abs(mu.imag()) <= 1e-8 * std::max(1.0, std::abs(mu))) reals.push_back(mu.real());
  }
  std::sort(reals.begin(), reals.end(), std::greater<>());
  std::vector<double> clusters;
  for (double r : reals) {
    if (clusters.empty() || std::abs(clusters.back() - r) > 1e-7 * scale) clusters.push_back(r);
  }

  double best_residual = std::numeric_limits<double>::infinity();
  for (double mu : clusters) {
    const Eigen::MatrixXd shifted = tt - mu * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd basis = kernel_basis(shifted, 1e-9);
    if (basis.cols() == 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
      basis = svd.matrixV().rightCols(1);
    }
    std::vector<Candidate> found = candidates_in_span(op, basis, tol);
    std::vector<Candidate> valid;
    for (auto& c : found) {
      best_residual = std::min(best_residual, c.residual);
      if (c.residual <= tol.residual_tol) valid.push_back(std::move(c));
    }
    if (valid.empty()) continue;
    auto pick = std::min_element(valid.begin(), valid.end(), [](const Candidate& a, const Candidate& b) {
      if (a.lambda != b.lambda) return a.lambda > b.lambda;
      return lex_less(a.h, b.h);
    });
    return DualEigenpair{pick->lambda, pick->h, pick->residual, iterations, Method::DenseFallback};
  }
  std::ostringstream msg;
  msg << "no dual-cone eigenvector of Tᵀ found within tolerance (best residual " << best_residual
      << "); the positivity hypothesis may be false or the problem numerically degenerate";
  throw SolverError(msg.str(), best_residual);
}

// Fixed-point iteration of F_T, optionally projected onto span(basis) after each step.
struct IterationOutcome {
  bool converged = false;
  Eigen::VectorXd f;
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  long iterations = 0;
};

IterationOutcome iterate_krein_map(const Eigen::MatrixXd& t, const Eigen::VectorXd& e,
                                   Eigen::VectorXd f, double target, long max_iter,
                                   const Eigen::MatrixXd* projector = nullptr) {
  IterationOutcome out;
  const Eigen::MatrixXd tt = t.transpose();
  double checkpoint = std::numeric_limits<double>::infinity();
  for (long it = 0;; ++it) {
    const Eigen::VectorXd g = tt * f;
    const double lambda = g.dot(e);
    const double residual = (g - lambda * f).lpNorm<Eigen::Infinity>();
    if (residual < out.residual) {
      out.residual = residual;
      out.f = f;
      out.lambda = lambda;
      out.iterations = it;
    }
    if (residual <= target) {
      out.converged = true;
      return out;
    }
    if (it >= max_iter) return out;
    // Stagnation guard: demand a halving of the best residual every 512 steps.
    if (it > 0 && it % 512 == 0) {
      if (out.residual > 0.5 * checkpoint) return out;
      checkpoint = out.residual;
    }
    Eigen::VectorXd next = f + g;
    if (projector) next = (*projector) * next;
    const double denom = next.dot(e);
    if (!(denom > 0.0)) {
      throw HypothesisError("krein map: (f + Tᵀf)(e) <= 0, so T is not positive on this cone");
    }
    f = next / denom;
  }
}

}  // namespace

Eigen::VectorXd initial_functional(const PositiveOperator& op, const Tolerances& tol) {
  const Eigen::Index n = dim(op.cone);
  for (const Eigen::VectorXd& f : {Eigen::VectorXd(Eigen::VectorXd::Ones(n)), central_functional(op, tol)}) {
    const double fe = f.dot(op.e);
    if (fe > 0.0 && dual_contains(op.cone, f, tol)) return f / fe;
  }
  throw HypothesisError("no positive functional f with f(e) > 0 exists for this cone and e");
}

Eigen::VectorXd krein_map(const PositiveOperator& op, const Eigen::VectorXd& f, const Tolerances& tol) {
  require_dim(f.size(), op.e.size(), "krein_map");
  if (std::abs(f.dot(op.e) - 1.0) > tol.membership_tol * std::max(1.0, f.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("krein_map: f must satisfy f(e) = 1");
  }
  if (!dual_contains(op.cone, f, tol)) throw InvalidArgument("krein_map: f is not a positive functional");
  const Eigen::VectorXd g = f + op.matrix.transpose() * f;
  const double denom = g.dot(op.e);
  if (!(denom > 0.0)) {
    throw HypothesisError("krein map: (f + Tᵀf)(e) <= 0, so T is not positive on this cone");
  }
  return g / denom;
}

DualEigenpair solve_dual_eigenvector(const PositiveOperator& op, const SolverOptions& options) {
  options.tol.validate();
  long iterations = 0;
  if (options.fallback != Fallback::Always) {
    // Aim at a quarter of the tolerance so recomputed residuals stay below it; a run that stalls
    // between the two still counts.
    const IterationOutcome run = iterate_krein_map(op.matrix, op.e, initial_functional(op, options.tol),
                                                   0.25 * options.tol.residual_tol, options.max_iter);
    iterations = run.iterations;
    if (run.converged || run.residual <= options.tol.residual_tol) {
      return DualEigenpair{run.lambda, run.f, run.residual, run.iterations, Method::FixedPoint};
    }
    if (options.fallback == Fallback::Never) {
      std::ostringstream msg;
      msg << "fixed-point iteration did not reach residual " << options.tol.residual_tol << " (best "
          << run.residual << ")";
      throw SolverError(msg.str(), run.residual);
    }
  }
  return dense_fallback(op, options.tol, iterations);
}

CommonEigenvector common_eigenvector(const CommutingFamily& family, const SolverOptions& options) {
  options.tol.validate();
  const auto& ops = family.operators;
  if (ops.empty()) throw InvalidArgument("common_eigenvector: empty family");
  if (ops.size() > kMaxFamilySize) throw InvalidArgument("common_eigenvector: family larger than 16");
  const Eigen::VectorXd& e = ops.front().e;
  const Eigen::Index n = e.size();
  for (const auto& op : ops) {
    require_dim(op.e.size(), n, "common_eigenvector");
    if (op.cone.index() != ops.front().cone.index() || dim(op.cone) != n || op.e != e) {
      throw InvalidArgument("common_eigenvector: operators must share cone and e");
    }
  }
  for (size_t i = 0; i < ops.size(); ++i) {
    for (size_t j = i + 1; j < ops.size(); ++j) {
      const Eigen::MatrixXd& a = ops[i].matrix;
      const Eigen::MatrixXd& b = ops[j].matrix;
      const double c = (a * b - b * a).norm() / (1.0 + a.norm() * b.norm());
      if (c > family.commutator_tol) {
        std::ostringstream msg;
        msg << "common_eigenvector: operators " << i << " and " << j << " do not commute (relative commutator "
            << c << ")";
        throw HypothesisError(msg.str());
      }
    }
  }

  // Stages run tighter than the final tolerance: the residual of a later operator on the slice
  // amplifies the error of the earlier eigenvector.
  SolverOptions inner = options;
  inner.tol.residual_tol = std::max(options.tol.residual_tol * 1e-3, 1e-14);

  CommonEigenvector out;
  DualEigenpair first = solve_dual_eigenvector(ops.front(), inner);
  if (first.residual > inner.tol.residual_tol) first = solve_dual_eigenvector(ops.front(), options);
  Eigen::VectorXd h = first.h;
  out.iterations = first.iterations;
  std::vector<double> lambdas{first.lambda};

  for (size_t s = 1; s < ops.size(); ++s) {
    Eigen::MatrixXd stacked(static_cast<Eigen::Index>(s) * n, n);
    for (size_t i = 0; i < s; ++i) {
      stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) =
          ops[i].matrix.transpose() - lambdas[i] * Eigen::MatrixXd::Identity(n, n);
    }
    Eigen::VectorXd sv;
    const Eigen::MatrixXd basis = kernel_basis(stacked, 1e-7, &sv);
    if (basis.cols() == 0) {
      std::ostringstream msg;
      msg << "common_eigenvector: joint eigenspace is numerically empty; smallest singular value "
          << sv.minCoeff() << ", largest " << sv.maxCoeff() << " (condition " << sv.maxCoeff() / sv.minCoeff()
          << ")";
      throw SolverError(msg.str(), sv.minCoeff());
    }
    const Eigen::MatrixXd projector = basis * basis.transpose();
    Eigen::VectorXd start = projector * h;
    start /= start.dot(e);
    const IterationOutcome run = iterate_krein_map(ops[s].matrix, e, start, inner.tol.residual_tol,
                                                   options.max_iter, &projector);
    out.iterations += run.iterations;
    if (run.converged || run.residual <= options.tol.residual_tol) {
      h = run.f;
    } else {
      // Dense route on the slice: eigenvectors of the compressed operator Bᵀ Sᵀ B.
      const Eigen::MatrixXd compressed = basis.transpose() * ops[s].matrix.transpose() * basis;
      Eigen::EigenSolver<Eigen::MatrixXd> es(compressed);
      std::vector<Candidate> valid;
      for (Eigen::Index k = 0; k < compressed.rows(); ++k) {
        const std::complex<double> mu = es.eigenvalues()(k);
        if (std::abs(mu.imag()) > 1e-8 * std::max(1.0, std::abs(mu))) continue;
        const Eigen::VectorXd v = basis * es.eigenvectors().col(k).real();
        for (auto& c : candidates_in_span(ops[s], v, options.tol)) {
          if (c.residual <= options.tol.residual_tol) valid.push_back(std::move(c));
        }
      }
      if (valid.empty()) {
        throw SolverError("common_eigenvector: no positive eigenvector of operator " + std::to_string(s) +
                              " on the joint eigenspace",
                          run.residual);
      }
      auto pick = std::min_element(valid.begin(), valid.end(), [](const Candidate& a, const Candidate& b) {
        if (a.lambda != b.lambda) return a.lambda > b.lambda;
        return lex_less(a.h, b.h);
      });
      h = pick->h;
    }
    lambdas.push_back((ops[s].matrix.transpose() * h).dot(e));
  }

  out.h = h;
  for (const auto& op : ops) {
    const Eigen::VectorXd g = op.matrix.transpose() * h;
    const double lambda = g.dot(e);
    const double residual = (g - lambda * h).lpNorm<Eigen::Infinity>();
    out.lambdas.push_back(lambda);
    out.residuals.push_back(residual);
    if (residual > options.tol.residual_tol) {
      std::ostringstream msg;
      msg << "common_eigenvector: final residual " << residual << " exceeds " << options.tol.residual_tol;
      throw SolverError(msg.str(), residual);
    }
  }
  if (!dual_contains(ops.front().cone, h, options.tol)) {
    throw SolverError("common_eigenvector: result left the dual cone");
  }
  return out;
}

DualEigenpair plus_identity_transfer(const DualEigenpair& shifted, const PositiveOperator& op,
                                     const Tolerances& tol) {
  require_dim(shifted.h.size(), op.e.size(), "plus_identity_transfer");
  DualEigenpair out = shifted;
  out.lambda = shifted.lambda - 1.0;
  out.residual = (op.matrix.transpose() * out.h - out.lambda * out.h).lpNorm<Eigen::Infinity>();
  if (out.residual > tol.residual_tol) {
    std::ostringstream msg;
    msg << "plus_identity_transfer: residual " << out.residual << " against Tᵀ exceeds " << tol.residual_tol;
    throw SolverError(msg.str(), out.residual);
  }
  return out;
}

}  // namespace krein
