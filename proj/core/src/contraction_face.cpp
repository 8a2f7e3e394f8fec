#include "krein/contraction_face.hpp"

#include "krein/errors.hpp"
#include "krein/random.hpp"
#include "krein/te_cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace krein {

namespace {

double max_abs(const Eigen::VectorXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd positive_part(const Eigen::VectorXd& x) { return x.cwiseMax(0.0); }

void require_unit(const Norm& norm, const Eigen::VectorXd& e, const Tolerances& tol, const char* what) {
  const double ne = norm(e);
  if (std::abs(ne - 1.0) > tol.membership_tol) {
    std::ostringstream msg;
    msg << what << ": ‖e‖ = " << ne << " must equal 1";
    throw InvalidArgument(msg.str());
  }
}

// Indices where |e_i| / w_i is maximal, w = 1 for the sup norm.
std::vector<Eigen::Index> sup_argmax(const Norm& norm, const Eigen::VectorXd& e) {
  const Eigen::Index n = e.size();
  const Eigen::VectorXd w =
      norm.kind() == Norm::Kind::WeightedSup ? norm.weights() : Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd r = e.cwiseAbs().cwiseQuotient(w);
  const double top = r.maxCoeff();
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r[i] >= top * (1.0 - 1e-12)) out.push_back(i);
  }
  return out;
}

std::optional<double> closed_form_dirder(const Norm& norm, const Eigen::VectorXd& e,
                                         const Eigen::VectorXd& x) {
  const auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  switch (norm.kind()) {
    case Norm::Kind::Linf:
    case Norm::Kind::WeightedSup: {
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i : sup_argmax(norm, e)) {
        const double w = norm.kind() == Norm::Kind::WeightedSup ? norm.weights()[i] : 1.0;
        best = std::max(best, sgn(e[i]) * x[i] / w);
      }
      return best;
    }
    case Norm::Kind::L1: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < e.size(); ++i) s += e[i] == 0.0 ? std::abs(x[i]) : sgn(e[i]) * x[i];
      return s;
    }
    case Norm::Kind::L2:
      return e.dot(x) / e.norm();
  }
  return std::nullopt;
}

void check_nonnegative_operator(const Eigen::MatrixXd& t, const Tolerances& tol) {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  const double lowest = t.minCoeff(&i, &j);
  if (lowest < -tol.membership_tol * std::max(1.0, t.cwiseAbs().maxCoeff())) {
    std::ostringstream msg;
    msg << "T is not positive: entry (" << i + 1 << ", " << j + 1 << ") = " << lowest
        << ", so T e_" << j + 1 << " leaves the positive cone";
    throw HypothesisError(msg.str(), Eigen::VectorXd::Unit(t.cols(), j));
  }
}

Eigen::VectorXd checked_positive_unit(const Norm& norm, const Eigen::VectorXd& e, const Tolerances& tol) {
  if (e.size() == 0 || max_abs(e) == 0.0) throw HypothesisError("e must be a non-zero positive vector", e);
  if (e.minCoeff() < -tol.membership_tol * max_abs(e)) {
    throw HypothesisError("e must be a positive vector", e);
  }
  return e.cwiseMax(0.0) / norm(e.cwiseMax(0.0));
}

void check_norm_one(const Norm& norm, const Eigen::MatrixXd& t) {
  const double opn = norm.operator_norm(t);
  if (std::abs(opn - 1.0) <= kNormOneTol) return;
  std::ostringstream msg;
  msg << "‖T‖ = " << opn << " in the " << norm.name() << " norm, but norm one is required";
  if (opn > 1.0) {
    msg << "; above one the conclusion can fail outright (a scaled shift is a positive operator"
           " with Te >= e and no positive eigenvector of its adjoint)";
  }
  throw HypothesisError(msg.str(), norm.operator_norm_witness(t));
}

Eigen::VectorXd check_growth(const Eigen::MatrixXd& t, const Eigen::VectorXd& e, const Tolerances& tol,
                             bool strict) {
  const Eigen::VectorXd growth = t * e - e;
  Eigen::Index i = 0;
  if (growth.minCoeff(&i) < -tol.membership_tol) {
    std::ostringstream msg;
    msg << "Te >= e fails at coordinate " << i + 1 << " (Te - e = " << growth[i] << ")";
    throw HypothesisError(msg.str(), growth);
  }
  if (strict && max_abs(growth) <= tol.membership_tol) {
    throw HypothesisError("Te = e, but Te > e (Te >= e with Te ≠ e) is required", growth);
  }
  return growth;
}

// Extreme points of the unit ball used to check invariance of the Te cone: all of them when
// there are at most 256, otherwise 256 seeded sign patterns.
Eigen::MatrixXd ball_points_for_check(const Norm& norm, Eigen::Index n, bool& exhaustive) {
  exhaustive = true;
  if (norm.kind() == Norm::Kind::L1 || n <= 8) {
    if (auto pts = ball_extreme_points(norm, n)) return *pts;
  }
  exhaustive = false;
  Rng rng(0x7e);
  const long count = 256;
  Eigen::MatrixXd pts(n, count);
  for (long c = 0; c < count; ++c) {
    Eigen::VectorXd s = rng.sign_vector(n);
    if (norm.kind() == Norm::Kind::WeightedSup) s = s.cwiseProduct(norm.weights());
    pts.col(c) = s;
  }
  return pts;
}

}  // namespace

MonotoneSpace make_monotone_space(Eigen::Index n, Norm norm) {
  if (n < 1) throw InvalidArgument("monotone space: dimension must be positive");
  if (norm.kind() == Norm::Kind::WeightedSup) require_dim(norm.weights().size(), n, "monotone space weights");
  return MonotoneSpace{n, std::move(norm)};
}

Verdict check_monotone(const MonotoneSpace& space, long trials, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  v.exhaustive = false;
  for (long t = 0; t < trials; ++t) {
    const Eigen::VectorXd y = rng.uniform_vector(space.n);
    const Eigen::VectorXd x = y.cwiseProduct(rng.uniform_vector(space.n));
    ++v.probes;
    if (space.norm(x) > space.norm(y) * (1.0 + 1e-12)) {
      v.holds = false;
      v.witness = x;
      return v;
    }
  }
  return v;
}

QuotientDescent quotient_descent(const std::function<long double(double)>& norm_at, double alpha_probe,
                                 long double unit_roundoff) {
  if (!(alpha_probe > 0.0)) throw InvalidArgument("quotient_descent: alpha_probe must be positive");
  const long double base = norm_at(0.0);
  double alpha = alpha_probe;
  long double q_prev = (norm_at(alpha) - base) / alpha;
  QuotientDescent out{static_cast<double>(q_prev), alpha, 1};
  for (int i = 1; i <= 20; ++i) {
    const double a = alpha_probe * std::ldexp(1.0, -i);
    const long double value = norm_at(a);
    const long double q = (value - base) / a;
    const long double noise = 64.0L * unit_roundoff * std::max(1.0L, std::fabs(value)) / a;
    if (q > q_prev + noise) break;  // convexity forbids a rise; this is rounding
    const bool settled = std::fabs(q - q_prev) <= noise;
    q_prev = q;
    out = QuotientDescent{static_cast<double>(q), a, i + 1};
    if (settled) break;
  }
  return out;
}

DirectionalDerivative dirder(const Norm& norm, const Eigen::VectorXd& e, const Eigen::VectorXd& x,
                             const Tolerances& tol) {
  tol.validate();
  require_dim(x.size(), e.size(), "dirder");
  require_unit(norm, e, tol, "dirder");
  if (x.size() && x.minCoeff() < 0.0) throw InvalidArgument("dirder: direction x must be nonnegative");
  const QuotientDescent d = quotient_descent(
      [&](double a) { return norm.eval_extended(e, a, x); }, tol.alpha_probe,
      std::numeric_limits<long double>::epsilon());
  DirectionalDerivative out;
  out.numeric = d.value;
  out.alpha = d.alpha;
  out.closed_form = closed_form_dirder(norm, e, x);
  out.value = out.closed_form ? *out.closed_form : out.numeric;
  return out;
}

const char* to_string(FaceKind kind) {
  switch (kind) {
    case FaceKind::CoordinateZeroSet: return "coordinate_zero_set";
    case FaceKind::SpectralProjectionKernel: return "spectral_projection_kernel";
    case FaceKind::NumericSample: return "numeric_sample";
  }
  return "?";
}

FaceDescription compute_face(const Norm& norm, const Eigen::VectorXd& e, const Tolerances& tol) {
  tol.validate();
  if (e.size() == 0) throw InvalidArgument("compute_face: empty e");
  if (e.minCoeff() < 0.0) throw InvalidArgument("compute_face: e must be nonnegative");
  require_unit(norm, e, tol, "compute_face");
  const Eigen::Index n = e.size();
  FaceDescription face;
  face.n = n;
  face.norm = norm;
  face.e = e;
  if (norm.kind() == Norm::Kind::Linf || norm.kind() == Norm::Kind::WeightedSup) {
    face.kind = FaceKind::CoordinateZeroSet;
    face.zero_set = sup_argmax(norm, e);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::find(face.zero_set.begin(), face.zero_set.end(), j) == face.zero_set.end()) {
        face.witnesses.push_back(Eigen::VectorXd::Unit(n, j));
      }
    }
    face.trivial = face.witnesses.empty();
    if (face.trivial) face.note = "every coordinate attains the norm of e, so E = {0}";
    return face;
  }
  face.kind = FaceKind::NumericSample;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd u = Eigen::VectorXd::Unit(n, j);
    if (dirder(norm, e, u, tol).value < tol.membership_tol) {
      face.witnesses.push_back(u);
    } else {
      face.zero_set.push_back(j);
    }
  }
  face.trivial = face.witnesses.empty();
  if (face.trivial) {
    face.note = "the norm grows at first order along every positive direction at e, so E = {0}";
  }
  return face;
}

bool face_contains(const FaceDescription& face, const Eigen::VectorXd& x, const Tolerances& tol) {
  require_dim(x.size(), face.n, "face_contains");
  const double scale = max_abs(x);
  if (scale == 0.0) return true;
  const double slack = tol.membership_tol * scale;
  if (x.minCoeff() < -slack) return false;
  switch (face.kind) {
    case FaceKind::CoordinateZeroSet:
      return std::all_of(face.zero_set.begin(), face.zero_set.end(),
                         [&](Eigen::Index i) { return x[i] <= slack; });
    case FaceKind::NumericSample:
      return dirder(face.norm, face.e, positive_part(x), tol).value < slack;
    case FaceKind::SpectralProjectionKernel:
      break;
  }
  throw InvalidArgument("face_contains: spectral faces act on matrices, not coordinate vectors");
}

Eigen::VectorXd sample_face(const FaceDescription& face, std::uint64_t seed) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(face.n);
  Rng rng(seed);
  for (const auto& w : face.witnesses) {
    if (rng.coin(0.7)) x += rng.uniform() * w;
  }
  return x;
}

FaceTheoremReport verify_face_theorem(const Eigen::MatrixXd& t, const Eigen::VectorXd& e,
                                      const MonotoneSpace& space, const Tolerances& tol, long samples,
                                      std::uint64_t seed) {
  tol.validate();
  const Eigen::Index n = space.n;
  require_dim(t.rows(), n, "verify_face_theorem (rows)");
  require_dim(t.cols(), n, "verify_face_theorem (cols)");
  require_dim(e.size(), n, "verify_face_theorem (e)");
  const Norm& norm = space.norm;

  check_nonnegative_operator(t, tol);
  FaceTheoremReport r;
  r.e = checked_positive_unit(norm, e, tol);
  check_norm_one(norm, t);
  r.operator_norm = norm.operator_norm(t);
  r.growth = check_growth(t, r.e, tol, true);
  r.face = compute_face(norm, r.e, tol);
  const FaceDescription& face = r.face;
  const auto in_e = [&](const Eigen::VectorXd& x) { return face_contains(face, x, tol); };

  r.growth_in_face = in_e(r.growth);
  r.e_outside = !in_e(r.e);
  r.invariant = std::all_of(face.witnesses.begin(), face.witnesses.end(),
                            [&](const Eigen::VectorXd& w) { return in_e(t * w); });
  r.additive = true;
  r.hereditary = true;
  r.ideal_invariant = true;
  r.separation_min = std::numeric_limits<double>::infinity();
  r.chain_bound_min = std::numeric_limits<double>::infinity();
  bool chain_consistent = true;

  for (long s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    Eigen::VectorXd x = sample_face(face, rng.engine()());
    Eigen::VectorXd y = sample_face(face, rng.engine()());
    // Put the pair on the scale of e so that x - y can come close to e if anything can.
    if (max_abs(x) > 0.0) x *= rng.uniform(0.0, 2.0) / norm(x);
    if (max_abs(y) > 0.0) y *= rng.uniform(0.0, 2.0) / norm(y);
    ++r.samples;

    r.invariant = r.invariant && in_e(t * x);
    r.additive = r.additive && in_e(x + y);
    r.hereditary = r.hereditary && in_e(x.cwiseProduct(rng.uniform_vector(n)));
    const Eigen::VectorXd tz = t * (x - y);
    r.ideal_invariant = r.ideal_invariant && in_e(tz.cwiseAbs());

    SeparationRecord rec;
    rec.distance = norm(r.e - (x - y));
    const Eigen::VectorXd p = positive_part(x - y);
    const QuotientDescent q = quotient_descent([&](double a) { return norm.eval_extended(r.e, a, p); },
                                               tol.alpha_probe, std::numeric_limits<long double>::epsilon());
    rec.quotient = q.value;
    rec.alpha = q.alpha;
    rec.chain_bound = 1.0 - q.value;
    r.separation_min = std::min(r.separation_min, rec.distance);
    r.chain_bound_min = std::min(r.chain_bound_min, rec.chain_bound);
    if (rec.distance < rec.chain_bound - 1e-9) chain_consistent = false;
    if (r.separation.size() < 8) r.separation.push_back(rec);
  }
  if (samples == 0) r.separation_min = r.chain_bound_min = 1.0;
  r.separation_ok = chain_consistent && r.separation_min >= r.separation_threshold - tol.membership_tol;
  return r;
}

DualEigenpair solve_te_eigenvector(const Eigen::MatrixXd& t, const Eigen::VectorXd& e,
                                   const MonotoneSpace& space, const SolverOptions& options) {
  const Tolerances& tol = options.tol;
  tol.validate();
  const Eigen::Index n = space.n;
  require_dim(t.rows(), n, "solve_te_eigenvector (rows)");
  require_dim(t.cols(), n, "solve_te_eigenvector (cols)");
  require_dim(e.size(), n, "solve_te_eigenvector (e)");
  const Norm& norm = space.norm;

  check_nonnegative_operator(t, tol);
  const Eigen::VectorXd en = checked_positive_unit(norm, e, tol);
  check_norm_one(norm, t);
  check_growth(t, en, tol, false);

  const TeDual dual = build_te_dual(en, norm, tol);
  Cone cone = make_te_cone(en, norm, tol);

  for (Eigen::Index j = 0; j < n; ++j) {
    if (!te_membership(t.col(j), dual, tol).member) {
      throw HypothesisError("T maps the generator e_" + std::to_string(j + 1) + " outside the cone",
                            Eigen::VectorXd::Unit(n, j));
    }
  }
  bool exhaustive = true;
  const Eigen::MatrixXd pts = ball_points_for_check(norm, n, exhaustive);
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    const Eigen::VectorXd g = en - pts.col(c);
    if (!te_membership(t * g, dual, tol).member) {
      throw HypothesisError("T maps the generator e - v outside the cone (witness v)",
                            Eigen::VectorXd(pts.col(c)));
    }
  }

  PositiveOperator op = make_positive_operator(t, std::move(cone), en, norm, tol, true);
  op.positivity_exhaustive = exhaustive;
  return solve_dual_eigenvector(op, options);
}

DualEigenpair fixed_point_to_eigenvector(const Eigen::MatrixXd& t, const Eigen::VectorXd& e,
                                         const Norm& norm, const SolverOptions& options) {
  const Tolerances& tol = options.tol;
  tol.validate();
  const Eigen::Index n = e.size();
  require_dim(t.rows(), n, "fixed_point_to_eigenvector (rows)");
  require_dim(t.cols(), n, "fixed_point_to_eigenvector (cols)");
  require_unit(norm, e, tol, "fixed_point_to_eigenvector");
  check_norm_one(norm, t);
  const Eigen::VectorXd drift = t * e - e;
  if (norm(drift) > tol.membership_tol) {
    std::ostringstream msg;
    msg << "e is not a fixed point of T: ‖Te - e‖ = " << norm(drift);
    throw HypothesisError(msg.str(), drift);
  }
  // T(2e + x) = 2e + Tx with ‖Tx‖ <= 1, so T preserves the cone over 2e + B.
  const Eigen::VectorXd e2 = 2.0 * e;
  PositiveOperator op = make_positive_operator(t, make_shifted_ball(e2, norm), e2, norm, tol, true);
  SolverOptions inner = options;
  inner.tol.residual_tol = 0.5 * tol.residual_tol;
  DualEigenpair pair = solve_dual_eigenvector(op, inner);
  pair.h *= 2.0;
  pair.lambda = (t.transpose() * pair.h).dot(e);
  pair.residual = dual_residual(t, pair.h, e);
  return pair;
}

}  // namespace krein
