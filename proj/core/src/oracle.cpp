#include "krein/oracle.hpp"

#include "krein/contraction_face.hpp"
#include "krein/errors.hpp"
#include "krein/krein_solver.hpp"
#include "krein/l1_criterion.hpp"
#include "krein/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace krein::oracle {

std::vector<EigenCluster> dense_dual_eigs(const Eigen::MatrixXd& t) {
  require_dim(t.cols(), t.rows(), "dense_dual_eigs (square matrix)");
  const Eigen::Index n = t.rows();
  if (n > 64) throw InvalidArgument("dense_dual_eigs: n must be at most 64");
  const Eigen::MatrixXd tt = t.transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(tt, false);
  if (es.info() != Eigen::Success) throw SolverError("dense_dual_eigs: eigensolver did not converge");
  std::vector<std::complex<double>> mus(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(mus.begin(), mus.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  const double scale = std::max(1.0, tt.cwiseAbs().maxCoeff());
  const double merge = 1e-7 * scale;

  std::vector<EigenCluster> out;
  for (const auto& mu : mus) {
    const bool real = std::abs(mu.imag()) <= 1e-8 * std::max(1.0, std::abs(mu));
    if (!out.empty() && out.back().real == real && std::abs(out.back().lambda - mu) <= merge) {
      auto& c = out.back();
      c.lambda = (c.lambda * static_cast<double>(c.multiplicity) + mu) / static_cast<double>(c.multiplicity + 1);
      ++c.multiplicity;
      continue;
    }
    out.push_back(EigenCluster{mu, real, 1, {}, 0.0});
  }
  for (auto& c : out) {
    if (!c.real) continue;
    c.lambda = c.lambda.real();
    const Eigen::MatrixXd shifted = tt - c.lambda.real() * Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < n; ++i) rank += s(i) > 1e-9 * std::max(1.0, s(0)) ? 1 : 0;
    c.basis = svd.matrixV().rightCols(std::max<Eigen::Index>(n - rank, 1));
    if (c.basis.cols() == 1) {
      // Rayleigh refinement of a simple eigenvalue.
      const Eigen::VectorXd v = c.basis.col(0);
      c.lambda = v.dot(tt * v);
    }
    for (Eigen::Index j = 0; j < c.basis.cols(); ++j) {
      const Eigen::VectorXd v = c.basis.col(j);
      c.residual = std::max(c.residual, (tt * v - c.lambda.real() * v).norm());
    }
  }
  return out;
}

std::optional<OracleEigenpair> dual_cone_eigenpair(const Eigen::MatrixXd& t, const Cone& cone,
                                                   const Eigen::VectorXd& e, const Tolerances& tol) {
  const Eigen::MatrixXd tt = t.transpose();
  for (const auto& c : dense_dual_eigs(t)) {
    if (!c.real) continue;
    std::vector<Eigen::VectorXd> tries;
    if (c.basis.cols() > 1) {
      if (auto f = find_dual_point(cone, e, c.basis, tol)) tries.push_back(*f);
    }
    for (Eigen::Index j = 0; j < c.basis.cols(); ++j) tries.push_back(c.basis.col(j));
    tries.push_back(c.basis.rowwise().sum());
    for (Eigen::VectorXd h : tries) {
      const double he = h.dot(e);
      if (!(std::abs(he) > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))) continue;
      h /= he;
      if (!dual_contains(cone, h, tol)) continue;
      const double lambda = (tt * h).dot(e);
      return OracleEigenpair{lambda, h, (tt * h - lambda * h).lpNorm<Eigen::Infinity>()};
    }
  }
  return std::nullopt;
}

const char* to_string(Family family) {
  switch (family) {
    case Family::NonnegOrthant: return "nonneg_orthant";
    case Family::L1KreinViaPerturbation: return "l1krein_via_perturbation";
    case Family::TeContraction: return "te_contraction";
    case Family::CommutingPair: return "commuting_pair";
    case Family::PositiveMapKraus: return "positive_map_kraus";
    case Family::PositiveMapTransposeComposed: return "positive_map_transpose_composed";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::NonnegOrthant, Family::L1KreinViaPerturbation, Family::TeContraction,
                   Family::CommutingPair, Family::PositiveMapKraus, Family::PositiveMapTransposeComposed}) {
    if (name == to_string(f)) return f;
  }
  throw InvalidArgument("unknown instance family '" + name + "'");
}

Eigen::Index family_cap(Family family) {
  switch (family) {
    case Family::NonnegOrthant:
    case Family::L1KreinViaPerturbation: return 64;
    case Family::TeContraction: return 20;
    case Family::CommutingPair: return 32;
    case Family::PositiveMapKraus:
    case Family::PositiveMapTransposeComposed: return 6;
  }
  return 0;
}

namespace {

Eigen::MatrixXd sparse_nonnegative(Rng& rng, Eigen::Index n) {
  Eigen::MatrixXd t(n, n);
  const double density = rng.uniform(0.3, 1.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = rng.coin(density) ? rng.uniform() : 0.0;
  return t;
}

std::vector<CMatrix> random_kraus(Rng& rng, Eigen::Index n) {
  const long count = 1 + static_cast<long>(rng.index(3));
  std::vector<CMatrix> ks;
  CMatrix gram = CMatrix::Zero(n, n);
  for (long k = 0; k < count; ++k) {
    ks.push_back(rng.complex_gaussian_matrix(n, n));
    gram += ks.back().adjoint() * ks.back();
  }
  const double s = std::sqrt(HermMatrix(0.5 * (gram + gram.adjoint())).operator_norm());
  for (auto& k : ks) k /= s;
  return ks;
}

// Returns an empty string when the instance meets its family's preconditions, otherwise the
// name of the failing predicate.
std::string precondition_failure(const Instance& inst) {
  const Tolerances tol;
  switch (inst.spec.family) {
    case Family::NonnegOrthant:
      return positivity_preserved(inst.matrices[0], inst.cone, tol) ? "" : "entrywise nonnegative";
    case Family::L1KreinViaPerturbation: {
      if (!(inst.perturbation_norm < 0.2)) return "‖R‖ < 1/5";
      const auto k = find_certificate_index(L1Matrix(inst.matrices[0]), tol.membership_tol);
      return k && *k == 0 ? "" : "criterion at k = 1";
    }
    case Family::TeContraction: {
      const Eigen::MatrixXd& t = inst.matrices[0];
      if (t.minCoeff() < 0.0) return "T >= 0";
      if (std::abs(Norm::linf().operator_norm(t) - 1.0) > 1e-12) return "‖T‖ = 1";
      const Eigen::VectorXd growth = t * inst.e - inst.e;
      if (growth.minCoeff() < -1e-12) return "Te >= e";
      if (growth.maxCoeff() <= 1e-6) return "Te ≠ e";
      return "";
    }
    case Family::CommutingPair: {
      const Eigen::MatrixXd& a = inst.matrices[0];
      const Eigen::MatrixXd& b = inst.matrices[1];
      if (a.minCoeff() < 0.0) return "T >= 0";
      const double c = (a * b - b * a).norm() / (1.0 + a.norm() * b.norm());
      return c <= 1e-12 ? "" : "commutator <= 1e-12";
    }
    case Family::PositiveMapKraus:
      return is_positive_map(*inst.map, 64, inst.spec.seed).level == PositivityLevel::CertifiedCp
                 ? ""
                 : "Choi matrix PSD";
    case Family::PositiveMapTransposeComposed:
      return is_positive_map(*inst.map, 256, inst.spec.seed).level != PositivityLevel::Falsified
                 ? ""
                 : "positive on sampled rank-one projectors";
  }
  return "unknown family";
}

Instance draw(const InstanceSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index n = spec.n;
  Instance inst;
  inst.spec = spec;
  switch (spec.family) {
    case Family::NonnegOrthant:
      inst.matrices = {sparse_nonnegative(rng, n)};
      inst.cone = make_orthant(n);
      inst.e = Eigen::VectorXd::Ones(n);
      inst.norm = Norm::linf();
      break;
    case Family::L1KreinViaPerturbation: {
      // Radii spread over (0, 0.199], denser near the top.
      const double radius = 0.199 * std::pow(rng.uniform(1e-3, 1.0), 0.25);
      Eigen::MatrixXd r = rng.gaussian_matrix(n, n);
      r *= radius / r.cwiseAbs().colwise().sum().maxCoeff();
      inst.perturbation_norm = r.cwiseAbs().colwise().sum().maxCoeff();
      inst.matrices = {corner_unit(n).entries() + r};
      inst.cone = make_l1_krein(n, 0);
      inst.e = Eigen::VectorXd::Unit(n, 0);
      inst.norm = Norm::l1();
      break;
    }
    case Family::TeContraction: {
      // Rows on the top set Z are stochastic and supported on Z; every other row puts mass
      // e_i + δ_i on Z and at most the rest elsewhere, so Te >= e and ‖T‖∞ = 1.
      const Eigen::Index z = 1 + rng.index(n - 1);
      Eigen::VectorXd e(n);
      for (Eigen::Index i = 0; i < n; ++i) e[i] = i < z ? 1.0 : rng.uniform(0.2, 0.9);
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < z; ++i) {
        Eigen::VectorXd w = rng.uniform_vector(z, 0.05, 1.0);
        w /= w.sum();
        t.row(i).head(z) = w.transpose();
      }
      const Eigen::Index strict = z + rng.index(n - z);
      for (Eigen::Index i = z; i < n; ++i) {
        const double slack = 1.0 - e[i];
        const double delta = (i == strict ? rng.uniform(0.2, 1.0) : rng.uniform(0.0, 1.0)) * slack;
        const double on_z = e[i] + delta;
        Eigen::VectorXd w = rng.uniform_vector(z, 0.05, 1.0);
        t.row(i).head(z) = (on_z * w / w.sum()).transpose();
        const double rest = rng.uniform(0.0, 1.0) * (1.0 - on_z);
        if (n - z > 0 && rest > 0.0) {
          Eigen::VectorXd u = rng.uniform_vector(n - z, 0.0, 1.0);
          t.row(i).tail(n - z) = (rest * u / std::max(u.sum(), 1e-300)).transpose();
        }
      }
      Eigen::PermutationMatrix<Eigen::Dynamic> p(n);
      p.setIdentity();
      std::shuffle(p.indices().data(), p.indices().data() + n, rng.engine());
      inst.matrices = {p * t * p.transpose()};
      inst.e = p * e;
      inst.cone = make_orthant(n);
      inst.norm = Norm::linf();
      break;
    }
    case Family::CommutingPair: {
      Eigen::MatrixXd t = sparse_nonnegative(rng, n) / static_cast<double>(n);
      inst.matrices = {t, t * t + t};
      inst.cone = make_orthant(n);
      inst.e = Eigen::VectorXd::Ones(n);
      inst.norm = Norm::linf();
      break;
    }
    case Family::PositiveMapKraus:
      inst.map = superop_from_kraus(random_kraus(rng, n));
      break;
    case Family::PositiveMapTransposeComposed: {
      const SuperOp cp = superop_from_kraus(random_kraus(rng, n));
      inst.map = rng.coin() ? compose(transpose_map(n), cp) : compose(cp, transpose_map(n));
      break;
    }
  }
  if (inst.map) {
    inst.cone = make_psd(n);
    inst.e = Eigen::VectorXd::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) inst.e[i * n + i] = 1.0;
    inst.norm = Norm::l2();
  }
  return inst;
}

}  // namespace

Instance generate(const InstanceSpec& spec) {
  const Eigen::Index lo = spec.family == Family::TeContraction ? 2 : 1;
  if (spec.n < lo || spec.n > family_cap(spec.family)) {
    throw InvalidArgument(std::string("generate: n out of range for ") + to_string(spec.family) + " (" +
                          std::to_string(lo) + ".." + std::to_string(family_cap(spec.family)) + ")");
  }
  std::string failure;
  for (int attempt = 0; attempt < 16; ++attempt) {
    Instance inst = draw(spec, derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    failure = precondition_failure(inst);
    if (failure.empty()) {
      inst.attempts = attempt + 1;
      return inst;
    }
  }
  throw Error(std::string("generate: ") + to_string(spec.family) + " rejected 16 draws; failing predicate: " +
              failure);
}

TrialRecord run_trial(Family family, Eigen::Index n, long index, std::uint64_t master_seed) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = derive_seed(master_seed, static_cast<std::uint64_t>(index));
  const double rel_tol = 1e-6;
  const Tolerances tol;
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  try {
    const Instance inst = generate(InstanceSpec{family, n, rec.seed});
    switch (family) {
      case Family::NonnegOrthant:
      case Family::L1KreinViaPerturbation:
      case Family::TeContraction: {
        const Eigen::MatrixXd& t = inst.matrices[0];
        DualEigenpair pair;
        Cone cone = inst.cone;
        Eigen::VectorXd e = inst.e;
        if (family == Family::TeContraction) {
          const MonotoneSpace space = make_monotone_space(n, inst.norm);
          const FaceTheoremReport face = verify_face_theorem(t, inst.e, space, tol, 50, rec.seed);
          if (!face.all_pass()) rec.note = "face theorem check failed";
          pair = solve_te_eigenvector(t, inst.e, space);
          e = face.e;
          cone = make_te_cone(e, inst.norm);
        } else {
          pair = solve_dual_eigenvector(make_positive_operator(t, inst.cone, inst.e, inst.norm));
        }
        const auto ref = dual_cone_eigenpair(t, cone, e, tol);
        if (!ref) {
          rec.note = "oracle found no dual-cone eigenvector";
          break;
        }
        rec.lambda_solver = pair.lambda;
        rec.lambda_oracle = ref->lambda;
        rec.residual = pair.residual;
        rec.relative_error = rel(pair.lambda, ref->lambda);
        const bool ok = rec.relative_error <= rel_tol && pair.residual <= tol.residual_tol &&
                        dual_contains(cone, pair.h, tol);
        rec.agree = ok && rec.note.empty();
        if (!ok && rec.note.empty()) rec.note = "eigenpair mismatch";
        break;
      }
      case Family::CommutingPair: {
        CommutingFamily fam;
        for (const auto& m : inst.matrices) fam.operators.push_back(make_positive_operator(m, inst.cone, inst.e, inst.norm));
        const CommonEigenvector common = common_eigenvector(fam);
        const auto ref = dual_cone_eigenpair(inst.matrices[0], inst.cone, inst.e, tol);
        if (!ref) {
          rec.note = "oracle found no dual-cone eigenvector";
          break;
        }
        const double l1 = common.lambdas[0];
        rec.lambda_solver = l1;
        rec.lambda_oracle = ref->lambda;
        rec.residual = std::max(common.residuals[0], common.residuals[1]);
        rec.relative_error = std::max(rel(l1, ref->lambda), rel(common.lambdas[1], l1 * l1 + l1));
        rec.agree = rec.relative_error <= rel_tol && rec.residual <= tol.residual_tol;
        if (!rec.agree) rec.note = "common eigenpair mismatch";
        break;
      }
      case Family::PositiveMapKraus:
      case Family::PositiveMapTransposeComposed: {
        const FixedState fs = fixed_state(*inst.map, tol.residual_tol);
        const CMatrix adj = adjoint_superop(*inst.map).action;
        Eigen::ComplexEigenSolver<CMatrix> es(adj, false);
        const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
        rec.lambda_solver = fs.lambda;
        rec.lambda_oracle = rho;
        rec.residual = fs.residual;
        rec.relative_error = rel(fs.lambda, rho);
        const bool psd = fs.min_eigenvalue >= -1e-10;
        const bool unit_trace = std::abs(fs.rho.trace().real() - 1.0) <= 1e-12;
        rec.agree = psd && unit_trace && fs.residual <= tol.residual_tol && rec.relative_error <= rel_tol;
        if (!rec.agree) rec.note = "fixed state mismatch";
        break;
      }
    }
  } catch (const std::exception& ex) {
    rec.agree = false;
    rec.note = ex.what();
  }
  return rec;
}

void DifferentialSummary::merge(const DifferentialSummary& other) {
  trials += other.trials;
  agreements += other.agreements;
  worst_relative_error = std::max(worst_relative_error, other.worst_relative_error);
  worst_residual = std::max(worst_residual, other.worst_residual);
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  records.insert(records.end(), other.records.begin(), other.records.end());
}

DifferentialSummary differential_run(Family family, Eigen::Index n, long trials, std::uint64_t seed,
                                     bool verbose) {
  const Eigen::Index lo = family == Family::TeContraction ? 2 : 1;
  if (n < lo || n > family_cap(family)) {
    throw InvalidArgument(std::string("differential_run: n out of range for ") + to_string(family) + " (" +
                          std::to_string(lo) + ".." + std::to_string(family_cap(family)) + ")");
  }
  if (trials < 0) throw InvalidArgument("differential_run: trials must be nonnegative");
  DifferentialSummary summary;
  summary.family = family;
  summary.n = n;
  for (long i = 0; i < trials; ++i) {
    DifferentialSummary one;
    one.family = family;
    one.n = n;
    const TrialRecord rec = run_trial(family, n, i, seed);
    one.trials = 1;
    one.agreements = rec.agree ? 1 : 0;
    one.worst_relative_error = rec.relative_error;
    one.worst_residual = rec.residual;
    if (!rec.agree) one.failures.push_back(rec);
    if (verbose) one.records.push_back(rec);
    summary.merge(one);
  }
  return summary;
}

}  // namespace krein::oracle
