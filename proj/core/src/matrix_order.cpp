#include "krein/matrix_order.hpp"

#include "krein/contraction_face.hpp"
#include "krein/errors.hpp"
#include "krein/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace krein {

namespace {

using cd = std::complex<double>;

Eigen::Index order_of(Eigen::Index squared, const char* what) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(squared))));
  if (n * n != squared || n == 0) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(squared) + " is not a square n²");
  }
  return n;
}

double scale_of(const CMatrix& a) { return std::max(1.0, a.size() ? a.cwiseAbs().maxCoeff() : 0.0); }

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

double min_herm_eig(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Swap permutation P with P·vec(X) = vec(Xᵀ).
Eigen::PermutationMatrix<Eigen::Dynamic> swap_permutation(Eigen::Index n) {
  Eigen::PermutationMatrix<Eigen::Dynamic> p(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) p.indices()[j * n + i] = static_cast<int>(i * n + j);
  }
  return p;
}

}  // namespace

CVector vec(const CMatrix& x) {
  const Eigen::Index n = x.rows();
  CVector v(x.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) v[i * x.cols() + j] = x(i, j);
  }
  return v;
}

CMatrix unvec(const CVector& v, Eigen::Index n) {
  require_dim(v.size(), n * n, "unvec");
  CMatrix x(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = v[i * n + j];
  }
  return x;
}

HermMatrix::HermMatrix(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("HermMatrix: matrix must be square");
  if (!a.allFinite()) throw InvalidArgument("HermMatrix: non-finite entry");
  const double dev = a.size() ? (a - a.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (dev > 1e-12 * scale_of(a)) {
    std::ostringstream msg;
    msg << "HermMatrix: matrix is not Hermitian (max |a - a†| = " << dev << ")";
    throw InvalidArgument(msg.str());
  }
  a_ = hermitian_part(a);
}

Eigen::VectorXd HermMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermMatrix::min_eigenvalue() const { return n() ? eigenvalues().minCoeff() : 0.0; }

double HermMatrix::operator_norm() const { return n() ? eigenvalues().cwiseAbs().maxCoeff() : 0.0; }

CMatrix SuperOp::apply(const CMatrix& x) const {
  require_dim(x.rows(), n, "SuperOp::apply (rows)");
  require_dim(x.cols(), n, "SuperOp::apply (cols)");
  return unvec(action * vec(x), n);
}

SuperOp superop_from_action(CMatrix action) {
  if (action.rows() != action.cols()) throw DimensionError("superoperator action must be square");
  const Eigen::Index n = order_of(action.rows(), "superoperator action");
  return SuperOp{n, std::move(action), std::nullopt, std::nullopt};
}

SuperOp superop_from_kraus(std::vector<CMatrix> kraus) {
  if (kraus.empty()) throw InvalidArgument("Kraus list is empty");
  const Eigen::Index n = kraus.front().rows();
  CMatrix action = CMatrix::Zero(n * n, n * n);
  for (const CMatrix& k : kraus) {
    require_dim(k.rows(), n, "Kraus operator (rows)");
    require_dim(k.cols(), n, "Kraus operator (cols)");
    action += kron(k, k.conjugate());
  }
  return SuperOp{n, std::move(action), std::move(kraus), std::nullopt};
}


CMatrix choi_of(const CMatrix& action, Eigen::Index n) {
  require_dim(action.rows(), n * n, "choi_of");
  CMatrix c(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) c(i * n + k, j * n + l) = action(k * n + l, i * n + j);
  return c;
}

CMatrix action_of_choi(const CMatrix& choi, Eigen::Index n) {
  require_dim(choi.rows(), n * n, "action_of_choi");
  CMatrix a(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) a(k * n + l, i * n + j) = choi(i * n + k, j * n + l);
  return a;
}

SuperOp superop_from_choi(CMatrix choi) {
  if (choi.rows() != choi.cols()) throw DimensionError("Choi matrix must be square");
  const Eigen::Index n = order_of(choi.rows(), "Choi matrix");
  CMatrix action = action_of_choi(choi, n);
  return SuperOp{n, std::move(action), std::nullopt, std::move(choi)};
}

SuperOp identity_map(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("identity_map: n must be positive");
  return superop_from_kraus({CMatrix::Identity(n, n)});
}

SuperOp transpose_map(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("transpose_map: n must be positive");
  CMatrix a = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(j * n + i, i * n + j) = 1.0;
  return superop_from_action(std::move(a));
}

SuperOp trace_map(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("trace_map: n must be positive");
  CMatrix a = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i) a(k * n + k, i * n + i) = 1.0 / static_cast<double>(n);
  return superop_from_action(std::move(a));
}

SuperOp compose(const SuperOp& a, const SuperOp& b) {
  require_dim(a.n, b.n, "compose");
  SuperOp out = superop_from_action(a.action * b.action);
  if (a.kraus && b.kraus) {
    std::vector<CMatrix> ks;
    for (const CMatrix& ka : *a.kraus)
      for (const CMatrix& kb : *b.kraus) ks.push_back(ka * kb);
    out.kraus = std::move(ks);
  }
  return out;
}

void check_consistency(const SuperOp& phi, double tol) {
  require_dim(phi.action.rows(), phi.n * phi.n, "superoperator action (rows)");
  require_dim(phi.action.cols(), phi.n * phi.n, "superoperator action (cols)");
  const double scale = scale_of(phi.action);
  if (phi.kraus) {
    const SuperOp k = superop_from_kraus(*phi.kraus);
    const double dev = (k.action - phi.action).cwiseAbs().maxCoeff();
    if (dev > tol * scale) {
      std::ostringstream msg;
      msg << "Kraus operators disagree with the action matrix by " << dev;
      throw InvalidArgument(msg.str());
    }
  }
  if (phi.choi) {
    require_dim(phi.choi->rows(), phi.n * phi.n, "Choi matrix");
    const double dev = (choi_of(phi.action, phi.n) - *phi.choi).cwiseAbs().maxCoeff();
    if (dev > tol * scale) {
      std::ostringstream msg;
      msg << "Choi matrix disagrees with the reshuffled action matrix by " << dev;
      throw InvalidArgument(msg.str());
    }
  }
}

SuperOp adjoint_superop(const SuperOp& phi) {
  const Eigen::Index n = phi.n;
  const auto p = swap_permutation(n);
  SuperOp out = superop_from_action(p * phi.action.transpose() * p);
  if (phi.kraus) {
    std::vector<CMatrix> ks;
    for (const CMatrix& k : *phi.kraus) ks.push_back(k.adjoint());
    out.kraus = std::move(ks);
  }
  if (phi.choi) out.choi = choi_of(out.action, n);

  Rng rng(0xad7);
  for (int trial = 0; trial < 4; ++trial) {
    const CMatrix x = rng.complex_gaussian_matrix(n, n);
    const CMatrix y = rng.complex_gaussian_matrix(n, n);
    const cd lhs = (phi.apply(x) * y).trace();
    const cd rhs = (x * out.apply(y)).trace();
    const double scale = std::max(1.0, phi.action.cwiseAbs().maxCoeff()) * x.norm() * y.norm() * n;
    if (std::abs(lhs - rhs) > 1e-10 * scale) {
      std::ostringstream msg;
      msg << "adjoint_superop: pairing identity violated by " << std::abs(lhs - rhs);
      throw Error(msg.str());
    }
  }
  return out;
}

const char* to_string(PositivityLevel level) {
  switch (level) {
    case PositivityLevel::CertifiedCp: return "certified_cp";
    case PositivityLevel::SampledPositive: return "sampled_positive";
    case PositivityLevel::Falsified: return "falsified";
  }
  return "?";
}

PositivityVerdict is_positive_map(const SuperOp& phi, long trials, std::uint64_t seed) {
  const Eigen::Index n = phi.n;
  PositivityVerdict v;
  const CMatrix c = phi.choi ? *phi.choi : choi_of(phi.action, n);
  const double cscale = scale_of(c);
  const bool choi_hermitian = (c - c.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * cscale;
  v.choi_min_eigenvalue = min_herm_eig(c);
  if (choi_hermitian && v.choi_min_eigenvalue >= -1e-10 * cscale) {
    v.level = PositivityLevel::CertifiedCp;
    return v;
  }

  const double ascale = scale_of(phi.action);
  const auto probe = [&](const CVector& u) {
    const CMatrix img = phi.apply(u * u.adjoint());
    ++v.trials;
    const double herm_dev = (img - img.adjoint()).cwiseAbs().maxCoeff();
    const double lo = min_herm_eig(img);
    if (herm_dev > 1e-10 * ascale || lo < -1e-10 * ascale) {
      v.level = PositivityLevel::Falsified;
      v.witness = u;
      v.witness_min_eigenvalue = lo;
      return false;
    }
    return true;
  };

  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!probe(CVector::Unit(n, i))) return v;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      for (cd phase : {cd(1, 0), cd(-1, 0), cd(0, 1), cd(0, -1)}) {
        CVector u = CVector::Zero(n);
        u[i] = r;
        u[j] = r * phase;
        if (!probe(u)) return v;
      }
    }
  }
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    if (!probe(rng.complex_unit_vector(n))) return v;
  }
  v.level = PositivityLevel::SampledPositive;
  return v;
}

namespace {

struct StateCandidate {
  double lambda;
  CMatrix rho;
  double residual;
  double min_eig;
};

std::optional<StateCandidate> as_state(const CMatrix& adj, const CMatrix& m, Eigen::Index n, double tol) {
  CMatrix h = hermitian_part(m);
  const cd tr = h.trace();
  if (!(std::abs(tr) > 1e-12 * scale_of(h))) return std::nullopt;
  h /= tr.real();
  const double lo = min_herm_eig(h);
  if (lo < -1e-10) return std::nullopt;
  const CMatrix img = unvec(adj * vec(h), n);
  const double lambda = img.trace().real();
  const double res = (img - lambda * h).norm();
  if (res > tol) return std::nullopt;
  return StateCandidate{lambda, h, res, lo};
}

}  // namespace

FixedState fixed_state(const SuperOp& phi, double tol, long max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("fixed_state: tolerance must be positive");
  const Eigen::Index n = phi.n;
  const CMatrix adj = adjoint_superop(phi).action;

  // Aim inside the tolerance so that a recomputation of the residual cannot land just above it.
  const double target = 0.25 * tol;
  CMatrix rho = CMatrix::Identity(n, n) / static_cast<double>(n);
  CMatrix best = rho;
  double best_res = std::numeric_limits<double>::infinity();
  double checkpoint = best_res;
  long best_it = 0;
  for (long it = 0;; ++it) {
    const CMatrix img = unvec(adj * vec(rho), n);
    const double lambda = img.trace().real();
    const double res = (img - lambda * rho).norm();
    if (res < best_res) {
      best_res = res;
      best = rho;
      best_it = it;
    }
    if (res <= target) {
      const double lo = min_herm_eig(rho);
      if (lo >= -1e-10) return FixedState{lambda, rho, res, lo, it, "fixed_point"};
      break;
    }
    if (it >= max_iter) break;
    if (it > 0 && it % 512 == 0) {
      if (best_res > 0.5 * checkpoint) break;
      checkpoint = best_res;
    }
    CMatrix next = hermitian_part(rho + img);
    const double denom = next.trace().real();
    if (!(denom > 0.0)) {
      throw HypothesisError("fixed_state: tr(ρ + Φ*(ρ)) <= 0, so the map is not positive");
    }
    rho = next / denom;
  }

  if (best_res <= tol) {
    const double lo = min_herm_eig(best);
    if (lo >= -1e-10) {
      const CMatrix img = unvec(adj * vec(best), n);
      return FixedState{img.trace().real(), best, best_res, lo, best_it, "fixed_point"};
    }
  }

  // Dense route: eigenspaces of Φ* for real eigenvalues, largest first.
  Eigen::ComplexEigenSolver<CMatrix> es(adj, false);
  if (es.info() != Eigen::Success) throw SolverError("fixed_state: eigensolver did not converge", best_res);
  std::vector<double> reals;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cd mu = es.eigenvalues()(i);
    if (std::abs(mu.imag()) <= 1e-8 * std::max(1.0, std::abs(mu))) reals.push_back(mu.real());
  }
  std::sort(reals.begin(), reals.end(), std::greater<>());
  const CMatrix id = CMatrix::Identity(n * n, n * n);
  for (double mu : reals) {
    Eigen::JacobiSVD<CMatrix> svd(adj - mu * id, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double thresh = 1e-9 * std::max(1.0, s(0));
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > thresh ? 1 : 0;
    const CMatrix basis = svd.matrixV().rightCols(std::max<Eigen::Index>(n * n - rank, 1));
    const CMatrix proj = basis * basis.adjoint();
    std::vector<CMatrix> tries{unvec(proj * vec(best), n),
                               unvec(proj * vec(CMatrix::Identity(n, n)), n)};
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      CMatrix m = unvec(basis.col(c), n);
      const cd tr = m.trace();
      if (std::abs(tr) > 1e-12) m *= std::conj(tr) / std::abs(tr);
      tries.push_back(m);
      tries.push_back(cd(0, 1) * m);
    }
    for (const CMatrix& m : tries) {
      if (auto c = as_state(adj, m, n, tol)) {
        return FixedState{c->lambda, c->rho, c->residual, c->min_eig, best_it, "dense_fallback"};
      }
    }
  }
  std::ostringstream msg;
  msg << "fixed_state: no PSD eigenmatrix of Φ* within tolerance (best residual " << best_res << ")";
  throw SolverError(msg.str(), best_res);
}

UnitDominanceReport unit_dominates_sa_ball(Eigen::Index n, long trials, std::uint64_t seed) {
  if (n < 1 || n > 64) throw InvalidArgument("unit_dominates_sa_ball: n must be in 1..64");
  UnitDominanceReport r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  const CMatrix id = CMatrix::Identity(n, n);
  const auto check = [&](const CMatrix& x) {
    ++r.trials;
    const double lo = min_herm_eig(id - x);
    r.min_eigenvalue = std::min(r.min_eigenvalue, lo);
    if (lo < -1e-10 && r.holds) {
      r.holds = false;
      r.witness = x;
    }
  };
  check(id);
  check(-id);
  for (long t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const CMatrix g = rng.complex_gaussian_matrix(n, n);
    CMatrix x = hermitian_part(g);
    x /= HermMatrix(x).operator_norm();
    if (!rng.coin(0.25)) x *= rng.uniform();
    check(x);
  }
  return r;
}

EigFunction::EigFunction(Eigen::VectorXd values) : values_(std::move(values)) {
  std::sort(values_.data(), values_.data() + values_.size(), std::greater<>());
}

double EigFunction::at(double t) const {
  if (t < 0.0) throw InvalidArgument("μ(t, x) is defined for t >= 0");
  const auto i = static_cast<Eigen::Index>(std::floor(t));
  return i < values_.size() ? values_[i] : 0.0;
}

double EigFunction::integral(double a) const {
  if (a < 0.0) throw InvalidArgument("integral: a must be nonnegative");
  double s = 0.0;
  for (Eigen::Index i = 0; i < values_.size() && static_cast<double>(i) < a; ++i) {
    s += values_[i] * std::min(1.0, a - static_cast<double>(i));
  }
  return s;
}

double EigFunction::partial_sum(Eigen::Index m) const {
  return values_.head(std::clamp<Eigen::Index>(m, 0, values_.size())).sum();
}

EigFunction eig_function(const HermMatrix& x) { return EigFunction(x.eigenvalues().cwiseAbs()); }

Eigen::VectorXd singular_values(const CMatrix& x) {
  if (x.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues();
}

PinchReport pinch_majorization(const HermMatrix& x, const std::vector<std::vector<Eigen::Index>>& partition) {
  const Eigen::Index n = x.n();
  std::vector<int> block(static_cast<size_t>(n), -1);
  for (size_t b = 0; b < partition.size(); ++b) {
    if (partition[b].empty()) throw InvalidArgument("partition: empty block");
    for (Eigen::Index i : partition[b]) {
      if (i < 0 || i >= n) throw InvalidArgument("partition: index " + std::to_string(i + 1) + " out of range");
      if (block[static_cast<size_t>(i)] != -1) {
        throw InvalidArgument("partition: index " + std::to_string(i + 1) + " appears twice");
      }
      block[static_cast<size_t>(i)] = static_cast<int>(b);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (block[static_cast<size_t>(i)] == -1) {
      throw InvalidArgument("partition: index " + std::to_string(i + 1) + " is not covered");
    }
  }
  PinchReport r;
  r.pinched = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (block[static_cast<size_t>(i)] == block[static_cast<size_t>(j)]) r.pinched(i, j) = x.matrix()(i, j);
  r.sigma_x = singular_values(x.matrix());
  r.sigma_pinched = singular_values(r.pinched);
  r.worst_margin = std::numeric_limits<double>::infinity();
  double sx = 0.0;
  double sp = 0.0;
  for (Eigen::Index m = 0; m < n; ++m) {
    sx += r.sigma_x[m];
    sp += r.sigma_pinched[m];
    r.worst_margin = std::min(r.worst_margin, sx - sp);
  }
  if (n == 0) r.worst_margin = 0.0;
  r.holds = r.worst_margin >= -1e-10;
  return r;
}

FacePsdResult face_psd(const HermMatrix& e, const HermMatrix& x, const Tolerances& tol) {
  tol.validate();
  require_dim(x.n(), e.n(), "face_psd");
  const Eigen::Index n = e.n();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(e.matrix());
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (n == 0) throw InvalidArgument("face_psd: empty matrices");
  if (ev.minCoeff() < -tol.membership_tol) throw InvalidArgument("face_psd: e must be PSD");
  if (std::abs(ev.maxCoeff() - 1.0) > tol.membership_tol) throw InvalidArgument("face_psd: ‖e‖ must equal 1");
  if (x.min_eigenvalue() < -tol.membership_tol * std::max(1.0, x.operator_norm())) {
    throw InvalidArgument("face_psd: x must be PSD");
  }
  FacePsdResult r;
  r.projector = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev[i] >= 1.0 - 1e-10) r.projector += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  const CMatrix pxp = r.projector * x.matrix() * r.projector;
  r.spectral_value = HermMatrix(hermitian_part(pxp)).eigenvalues().maxCoeff();

  // Numeric cross-check in the eigenbasis of e, with the eigenvalues merged into the projector
  // set to exactly 1. Otherwise the rounding split of a repeated top eigenvalue (~1e-16) shows
  // up as a δ/α drift of the quotient at small α.
  using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  LMatrix dl = LMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) dl(i, i) = ev[i] >= 1.0 - 1e-10 ? 1.0L : static_cast<long double>(ev[i]);
  const CMatrix y = es.eigenvectors().adjoint() * x.matrix() * es.eigenvectors();
  const LMatrix yl = hermitian_part(y).cast<std::complex<long double>>();
  const auto op_norm = [&](double a) {
    Eigen::SelfAdjointEigenSolver<LMatrix> s(dl + static_cast<long double>(a) * yl, Eigen::EigenvaluesOnly);
    return s.eigenvalues().cwiseAbs().maxCoeff();
  };
  r.numeric = quotient_descent(op_norm, tol.alpha_probe, std::numeric_limits<long double>::epsilon()).value;
  r.member = r.spectral_value <= tol.membership_tol * std::max(1.0, x.operator_norm());
  return r;
}

}  // namespace krein
