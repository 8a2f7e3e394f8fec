#include "krein/cone.hpp"

#include "krein/errors.hpp"
#include "krein/lp.hpp"
#include "krein/random.hpp"
#include "krein/te_cone.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace krein {

void Tolerances::validate() const {
  for (double v : {membership_tol, residual_tol, alpha_probe}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("tolerances must be positive and finite");
  }
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTiny = 1e-300;

double max_abs(const Eigen::VectorXd& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd unvec(const Eigen::VectorXd& x, Eigen::Index order) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      x.data(), order, order);
}

double min_sym_eigenvalue(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

using VectorFn = std::function<bool(const Eigen::VectorXd&)>;

// Visits the vertices of the unit ball; returns false when they are not enumerable.
// The visitor returns false to stop early.
bool for_each_ball_vertex(const Norm& norm, Eigen::Index n, const VectorFn& fn) {
  switch (norm.kind()) {
    case Norm::Kind::L1:
      for (Eigen::Index i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
          v[i] = s;
          if (!fn(v)) return true;
        }
      }
      return true;
    case Norm::Kind::Linf:
    case Norm::Kind::WeightedSup: {
      if (n > kMaxEnumeratedSupDim) return false;
      const Eigen::VectorXd w =
          norm.kind() == Norm::Kind::Linf ? Eigen::VectorXd::Ones(n) : norm.weights();
      const std::uint64_t count = std::uint64_t{1} << n;
      Eigen::VectorXd v(n);
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (Eigen::Index i = 0; i < n; ++i) v[i] = ((mask >> i) & 1U) ? -w[i] : w[i];
        if (!fn(v)) return true;
      }
      return true;
    }
    case Norm::Kind::L2:
      return false;
  }
  return false;
}

bool for_each_generator(const Cone& cone, const VectorFn& fn) {
  return std::visit(
      overloaded{
          [&](const cones::Orthant& c) {
            for (Eigen::Index i = 0; i < c.n; ++i) {
              if (!fn(Eigen::VectorXd::Unit(c.n, i))) break;
            }
            return true;
          },
          [&](const cones::L1Krein& c) {
            const Eigen::VectorXd ek = Eigen::VectorXd::Unit(c.n, c.k);
            if (c.n == 1) {
              fn(ek);
              return true;
            }
            for (Eigen::Index j = 0; j < c.n; ++j) {
              if (j == c.k) continue;
              const Eigen::VectorXd ej = Eigen::VectorXd::Unit(c.n, j);
              if (!fn(ek + ej) || !fn(ek - ej)) break;
            }
            return true;
          },
          [&](const cones::Polyhedral& c) {
            for (Eigen::Index j = 0; j < c.generators.cols(); ++j) {
              if (!fn(c.generators.col(j))) break;
            }
            return true;
          },
          [&](const cones::ShiftedBall& c) {
            return for_each_ball_vertex(c.norm, c.e.size(),
                                        [&](const Eigen::VectorXd& v) { return fn(c.e + v); });
          },
          [&](const cones::TeCone& c) {
            const Eigen::Index n = c.e.size();
            if (c.norm.kind() != Norm::Kind::L1 && n > kMaxEnumeratedSupDim) return false;
            bool go = true;
            for (Eigen::Index i = 0; i < n && go; ++i) go = fn(Eigen::VectorXd::Unit(n, i));
            if (!go) return true;
            return for_each_ball_vertex(c.norm, n,
                                        [&](const Eigen::VectorXd& v) { return fn(c.e - v); });
          },
          [&](const cones::Psd&) { return false; },
      },
      cone);
}

void check_e(const Eigen::VectorXd& e, const Norm& norm, const char* what) {
  if (e.size() == 0) throw InvalidArgument(std::string(what) + ": empty vector");
  if (norm.kind() == Norm::Kind::WeightedSup) require_dim(e.size(), norm.weights().size(), what);
  if (e.isZero(0.0)) throw InvalidArgument(std::string(what) + ": e must be nonzero");
}

bool polyhedral_contains(const Eigen::MatrixXd& gens, const Eigen::VectorXd& x, double tol) {
  const Eigen::Index n = gens.rows();
  const Eigen::Index m = gens.cols();
  // min Σ(s+ + s-) s.t. G λ + s+ - s- = x, all variables >= 0: the ℓ1 distance from x to cone(G).
  lp::LinearProgram prog(m + 2 * n);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(m + 2 * n);
  cost.tail(2 * n).setOnes();
  prog.set_objective(cost);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m + 2 * n);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double s = max_abs(gens.col(j));
      row[j] = s > 0.0 ? gens(i, j) / s : 0.0;
    }
    row[m + i] = 1.0;
    row[m + n + i] = -1.0;
    prog.add_constraint(row, lp::Relation::Equal, x[i]);
  }
  const lp::Result res = prog.solve();
  if (res.status != lp::Status::Optimal) {
    throw SolverError(std::string("polyhedral membership LP: ") + lp::to_string(res.status));
  }
  return res.objective <= tol * std::max(x.lpNorm<1>(), kTiny);
}

}  // namespace

Cone make_orthant(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("orthant: dimension must be positive");
  return cones::Orthant{n};
}

Cone make_l1_krein(Eigen::Index n, Eigen::Index k) {
  if (n < 1 || k < 0 || k >= n) throw InvalidArgument("l1krein: need 0 <= k < n");
  return cones::L1Krein{n, k};
}

Cone make_polyhedral(Eigen::MatrixXd generators) {
  if (generators.rows() < 1 || generators.cols() < 1) {
    throw InvalidArgument("polyhedral: need at least one generator of positive dimension");
  }
  return cones::Polyhedral{std::move(generators)};
}

Cone make_shifted_ball(Eigen::VectorXd e, Norm norm) {
  check_e(e, norm, "shifted_ball");
  return cones::ShiftedBall{std::move(e), std::move(norm)};
}

Cone make_te_cone(Eigen::VectorXd e, Norm norm, const Tolerances& tol) {
  build_te_dual(e, norm, tol);
  return cones::TeCone{std::move(e), std::move(norm)};
}

Cone make_psd(Eigen::Index order) {
  if (order < 1) throw InvalidArgument("psd: order must be positive");
  return cones::Psd{order};
}

Eigen::Index dim(const Cone& cone) {
  return std::visit(overloaded{
                        [](const cones::Orthant& c) { return c.n; },
                        [](const cones::L1Krein& c) { return c.n; },
                        [](const cones::Polyhedral& c) { return c.generators.rows(); },
                        [](const cones::ShiftedBall& c) { return c.e.size(); },
                        [](const cones::TeCone& c) { return c.e.size(); },
                        [](const cones::Psd& c) { return c.order * c.order; },
                    },
                    cone);
}

std::string kind_name(const Cone& cone) {
  static constexpr const char* names[] = {"orthant", "l1krein", "polyhedral",
                                          "shifted_ball", "te_cone", "psd"};
  return names[cone.index()];
}

bool contains(const Cone& cone, const Eigen::VectorXd& x, const Tolerances& tol) {
  tol.validate();
  require_dim(x.size(), dim(cone), "contains");
  const double rel = tol.membership_tol;
  return std::visit(
      overloaded{
          [&](const cones::Orthant&) { return (x.array() >= -rel * max_abs(x)).all(); },
          [&](const cones::L1Krein& c) {
            const double rest = x.lpNorm<1>() - std::abs(x[c.k]);
            return x[c.k] + rel * max_abs(x) >= rest;
          },
          [&](const cones::Polyhedral& c) { return polyhedral_contains(c.generators, x, rel); },
          [&](const cones::ShiftedBall& c) {
            check_e(c.e, c.norm, "shifted_ball");
            if (x.isZero(0.0)) return true;
            const ScaleFit fit = shifted_ball_fit(c.e, c.norm, x);
            return fit.gap <= rel * c.norm(x);
          },
          [&](const cones::TeCone& c) { return te_membership(x, TeDual{c.e, c.norm}, tol).member; },
          [&](const cones::Psd& c) {
            const Eigen::MatrixXd m = unvec(x, c.order);
            const double scale = m.norm();
            if ((m - m.transpose()).cwiseAbs().maxCoeff() > rel * scale) return false;
            return min_sym_eigenvalue(m) >= -rel * scale;
          },
      },
      cone);
}

bool dual_contains(const Cone& cone, const Eigen::VectorXd& f, const Tolerances& tol) {
  tol.validate();
  require_dim(f.size(), dim(cone), "dual_contains");
  const double slack = tol.membership_tol * std::max(max_abs(f), kTiny);
  return std::visit(
      overloaded{
          [&](const cones::Orthant&) { return (f.array() >= -slack).all(); },
          [&](const cones::L1Krein& c) {
            for (Eigen::Index j = 0; j < c.n; ++j) {
              if (j != c.k && f[c.k] - std::abs(f[j]) < -slack) return false;
            }
            return f[c.k] >= -slack;
          },
          [&](const cones::Polyhedral& c) {
            for (Eigen::Index j = 0; j < c.generators.cols(); ++j) {
              const double s = max_abs(c.generators.col(j));
              if (s > 0.0 && f.dot(c.generators.col(j)) / s < -slack) return false;
            }
            return true;
          },
          [&](const cones::ShiftedBall& c) {
            return f.dot(c.e) >= c.norm.dual(f) - slack * std::max(1.0, c.norm(c.e));
          },
          [&](const cones::TeCone& c) { return te_dual_contains(TeDual{c.e, c.norm}, f, tol); },
          [&](const cones::Psd& c) {
            const Eigen::MatrixXd m = unvec(f, c.order);
            return min_sym_eigenvalue(m) >= -tol.membership_tol * std::max(m.norm(), kTiny);
          },
      },
      cone);
}

std::optional<Eigen::MatrixXd> ball_extreme_points(const Norm& norm, Eigen::Index n) {
  std::vector<Eigen::VectorXd> pts;
  if (!for_each_ball_vertex(norm, n, [&](const Eigen::VectorXd& v) {
        pts.push_back(v);
        return true;
      })) {
    return std::nullopt;
  }
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(pts.size()));
  for (size_t j = 0; j < pts.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = pts[j];
  return out;
}

std::optional<Eigen::MatrixXd> cone_generators(const Cone& cone) {
  std::vector<Eigen::VectorXd> gens;
  if (!for_each_generator(cone, [&](const Eigen::VectorXd& g) {
        gens.push_back(g);
        return true;
      })) {
    return std::nullopt;
  }
  Eigen::MatrixXd out(dim(cone), static_cast<Eigen::Index>(gens.size()));
  for (size_t j = 0; j < gens.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = gens[j];
  return out;
}

Verdict dominates_ball(const Cone& cone, const Norm& norm, const Eigen::VectorXd& e,
                       const Tolerances& tol, long probes, std::uint64_t seed) {
  tol.validate();
  const Eigen::Index n = dim(cone);
  require_dim(e.size(), n, "dominates_ball");
  if (norm.kind() == Norm::Kind::WeightedSup) require_dim(n, norm.weights().size(), "dominates_ball");
  if (std::abs(norm(e) - 1.0) > tol.membership_tol) {
    throw InvalidArgument("dominates_ball: ‖e‖ must equal 1 (got " + std::to_string(norm(e)) + ")");
  }

  Verdict verdict;
  const auto check = [&](const Eigen::VectorXd& v) {
    ++verdict.probes;
    if (!contains(cone, e - v, tol)) {
      verdict.holds = false;
      verdict.witness = v;
      return false;
    }
    return true;
  };

  if (for_each_ball_vertex(norm, n, check)) return verdict;

  Rng rng(seed);
  if (norm.kind() == Norm::Kind::L2) {
    if (std::holds_alternative<cones::Orthant>(cone)) {
      // e - v >= 0 for all ‖v‖₂ <= 1 iff e_i >= 1 for every i.
      Eigen::Index worst = 0;
      if (e.minCoeff(&worst) < 1.0 - tol.membership_tol) {
        verdict.holds = false;
        verdict.witness = Eigen::VectorXd::Unit(n, worst);
        return verdict;
      }
      for (long p = 0; p < probes && check(rng.unit_vector(n)); ++p) {
      }
      return verdict;
    }
    verdict.exhaustive = false;
    for (long p = 0; p < probes && check(rng.unit_vector(n)); ++p) {
    }
    return verdict;
  }
  verdict.exhaustive = false;
  const Eigen::VectorXd w =
      norm.kind() == Norm::Kind::WeightedSup ? norm.weights() : Eigen::VectorXd::Ones(n);
  for (long p = 0; p < probes && check(rng.sign_vector(n).cwiseProduct(w)); ++p) {
  }
  return verdict;
}

Verdict positivity_preserved(const Eigen::MatrixXd& t, const Cone& cone, const Tolerances& tol,
                             long probes, std::uint64_t seed) {
  tol.validate();
  const Eigen::Index n = dim(cone);
  require_dim(t.rows(), n, "positivity_preserved (rows)");
  require_dim(t.cols(), n, "positivity_preserved (cols)");

  Verdict verdict;
  const auto check = [&](const Eigen::VectorXd& g) {
    ++verdict.probes;
    if (!contains(cone, t * g, tol)) {
      verdict.holds = false;
      verdict.witness = g;
      return false;
    }
    return true;
  };
  if (for_each_generator(cone, check)) return verdict;

  verdict.exhaustive = false;
  Rng rng(seed);
  for (long p = 0; p < probes; ++p) {
    Eigen::VectorXd g;
    if (const auto* psd = std::get_if<cones::Psd>(&cone)) {
      const Eigen::VectorXd v = rng.unit_vector(psd->order);
      const Eigen::MatrixXd outer = v * v.transpose();
      g = Eigen::Map<const Eigen::VectorXd>(outer.data(), n);  // symmetric: layout irrelevant
    } else if (const auto* sb = std::get_if<cones::ShiftedBall>(&cone)) {
      Eigen::VectorXd v = sb->norm.kind() == Norm::Kind::L2 ? rng.unit_vector(n) : rng.sign_vector(n);
      if (sb->norm.kind() == Norm::Kind::WeightedSup) v = v.cwiseProduct(sb->norm.weights());
      g = sb->e + v;
    } else if (const auto* te = std::get_if<cones::TeCone>(&cone)) {
      Eigen::VectorXd v = rng.sign_vector(n);
      if (te->norm.kind() == Norm::Kind::WeightedSup) v = v.cwiseProduct(te->norm.weights());
      g = rng.coin() ? Eigen::VectorXd(te->e - v) : Eigen::VectorXd(Eigen::VectorXd::Unit(n, rng.index(n)));
    } else {
      break;
    }
    if (!check(g)) break;
  }
  return verdict;
}

bool is_proper(const Cone& cone, const Tolerances& tol) {
  if (std::holds_alternative<cones::Orthant>(cone) || std::holds_alternative<cones::L1Krein>(cone) ||
      std::holds_alternative<cones::Psd>(cone)) {
    return true;
  }
  if (const auto* sb = std::get_if<cones::ShiftedBall>(&cone)) {
    return sb->norm(sb->e) > 1.0 + tol.membership_tol;
  }
  const auto gens = cone_generators(cone);
  if (!gens) throw InvalidArgument("is_proper: generators not enumerable for this cone");
  // Pointed iff some f is strictly positive on every nonzero generator.
  const Eigen::Index n = gens->rows();
  lp::LinearProgram prog(n);
  for (Eigen::Index i = 0; i < n; ++i) prog.set_free(i);
  for (Eigen::Index j = 0; j < gens->cols(); ++j) {
    const double s = max_abs(gens->col(j));
    if (s == 0.0) continue;
    prog.add_constraint(gens->col(j).transpose() / s, lp::Relation::GreaterEqual, 1.0);
  }
  return prog.solve().status == lp::Status::Optimal;
}

ScaleFit shifted_ball_fit(const Eigen::VectorXd& e, const Norm& norm, const Eigen::VectorXd& x) {
  require_dim(x.size(), e.size(), "shifted_ball_fit");
  check_e(e, norm, "shifted_ball_fit");
  const double ne = norm(e);
  const auto g = [&](double a) { return norm(x - a * e) - a; };
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (ne < 1.0) return {inf, -inf};

  ScaleFit best{0.0, g(0.0)};
  const auto consider = [&](double a) {
    if (!(a > 0.0) || !std::isfinite(a)) return;
    const double v = g(a);
    if (v < best.gap) best = {a, v};
  };

  const Eigen::Index n = e.size();
  switch (norm.kind()) {
    case Norm::Kind::L1:
      // g is convex piecewise linear with kinks at x_i / e_i; its slope at infinity is ‖e‖ - 1 >= 0.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (e[i] != 0.0) consider(x[i] / e[i]);
      }
      return best;
    case Norm::Kind::Linf:
    case Norm::Kind::WeightedSup: {
      // ‖x - αe‖ is the max of the 2n lines ±(x_i - α e_i)/w_i; kinks are pairwise crossings.
      const Eigen::VectorXd w =
          norm.kind() == Norm::Kind::Linf ? Eigen::VectorXd::Ones(n) : norm.weights();
      std::vector<double> icpt, slope;
      icpt.reserve(static_cast<size_t>(2 * n));
      slope.reserve(static_cast<size_t>(2 * n));
      for (Eigen::Index i = 0; i < n; ++i) {
        icpt.push_back(x[i] / w[i]);
        slope.push_back(-e[i] / w[i]);
        icpt.push_back(-x[i] / w[i]);
        slope.push_back(e[i] / w[i]);
      }
      for (size_t p = 0; p < icpt.size(); ++p) {
        for (size_t q = p + 1; q < icpt.size(); ++q) {
          if (slope[p] != slope[q]) consider((icpt[q] - icpt[p]) / (slope[p] - slope[q]));
        }
      }
      return best;
    }
    case Norm::Kind::L2: {
      // Any feasible α satisfies α(‖e‖-1) <= ‖x‖, and g(α) > g(0) beyond 2‖x‖/(‖e‖-1).
      const double nx = norm(x);
      double lo = 0.0;
      double hi = ne > 1.0 ? 2.0 * nx / (ne - 1.0) : 1e6 * (nx + 1.0);
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = hi - phi * (hi - lo);
      double b = lo + phi * (hi - lo);
      double ga = g(a), gb = g(b);
      for (int it = 0; it < 400 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        if (ga <= gb) {
          hi = b;
          b = a;
          gb = ga;
          a = hi - phi * (hi - lo);
          ga = g(a);
        } else {
          lo = a;
          a = b;
          ga = gb;
          b = lo + phi * (hi - lo);
          gb = g(b);
        }
      }
      consider(0.5 * (lo + hi));
      return best;
    }
  }
  return best;
}

GaugeBounds w_gauge_bounds(const Eigen::VectorXd& e, const Norm& norm) {
  const double ne = norm(e);
  if (!(ne > 1.0)) throw InvalidArgument("w_gauge: requires ‖e‖ > 1");
  const double coeff = std::max(2.0, 2.0 * ne / (ne - 1.0));
  const double radius = coeff * (ne + 1.0) + ne;
  return {1.0 / radius, 1.0, coeff};
}

double w_gauge(const Eigen::VectorXd& e, const Norm& norm, const Eigen::VectorXd& x,
               const Tolerances& tol) {
  tol.validate();
  require_dim(x.size(), e.size(), "w_gauge");
  check_e(e, norm, "w_gauge");
  const GaugeBounds bounds = w_gauge_bounds(e, norm);
  const double nx = norm(x);
  if (nx == 0.0) return 0.0;

  const double ne = norm(e);
  const auto in_c0 = [&](const Eigen::VectorXd& y) {
    if (y.isZero(0.0)) return true;
    return shifted_ball_fit(e, norm, y).gap <= 1e-3 * tol.membership_tol * (ne + norm(y));
  };
  const auto in_w = [&](double t) {
    const Eigen::VectorXd w = x / t;
    return in_c0(e + w) && in_c0(e - w);
  };

  double lo = bounds.lower * nx;
  double hi = bounds.upper * nx;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (in_w(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::optional<LinearDual> linear_dual(const Cone& cone) {
  // Rows encoding f(c) >= ‖f‖_* with auxiliary nonnegative variables.
  const auto norm_rows = [](const Eigen::VectorXd& c, const Norm& norm,
                            bool nonneg) -> std::optional<LinearDual> {
    const Eigen::Index n = c.size();
    LinearDual d;
    const Eigen::Index extra = nonneg ? n : 0;
    switch (norm.kind()) {
      case Norm::Kind::Linf:
      case Norm::Kind::WeightedSup: {
        const Eigen::VectorXd w =
            norm.kind() == Norm::Kind::Linf ? Eigen::VectorXd::Ones(n) : norm.weights();
        d.aux = n;  // u_i >= |f_i|
        d.rows = Eigen::MatrixXd::Zero(2 * n + 1 + extra, 2 * n);
        for (Eigen::Index i = 0; i < n; ++i) {
          d.rows(2 * i, n + i) = 1.0;
          d.rows(2 * i, i) = -1.0;
          d.rows(2 * i + 1, n + i) = 1.0;
          d.rows(2 * i + 1, i) = 1.0;
        }
        d.rows.row(2 * n).head(n) = c.transpose();
        d.rows.row(2 * n).tail(n) = -w.transpose();
        break;
      }
      case Norm::Kind::L1:
        d.aux = 1;  // t >= max |f_i|
        d.rows = Eigen::MatrixXd::Zero(2 * n + 1 + extra, n + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
          d.rows(2 * i, n) = 1.0;
          d.rows(2 * i, i) = -1.0;
          d.rows(2 * i + 1, n) = 1.0;
          d.rows(2 * i + 1, i) = 1.0;
        }
        d.rows.row(2 * n).head(n) = c.transpose();
        d.rows(2 * n, n) = -1.0;
        break;
      case Norm::Kind::L2:
        return std::nullopt;
    }
    for (Eigen::Index i = 0; i < extra; ++i) d.rows(2 * n + 1 + i, i) = 1.0;
    return d;
  };

  return std::visit(
      overloaded{
          [](const cones::Orthant& c) -> std::optional<LinearDual> {
            return LinearDual{Eigen::MatrixXd::Identity(c.n, c.n), 0};
          },
          [](const cones::L1Krein& c) -> std::optional<LinearDual> {
            LinearDual d;
            d.rows = Eigen::MatrixXd::Zero(c.n == 1 ? 1 : 2 * (c.n - 1), c.n);
            if (c.n == 1) {
              d.rows(0, 0) = 1.0;
              return d;
            }
            Eigen::Index r = 0;
            for (Eigen::Index j = 0; j < c.n; ++j) {
              if (j == c.k) continue;
              d.rows(r, c.k) = 1.0;
              d.rows(r++, j) = 1.0;
              d.rows(r, c.k) = 1.0;
              d.rows(r++, j) = -1.0;
            }
            return d;
          },
          [](const cones::Polyhedral& c) -> std::optional<LinearDual> {
            Eigen::MatrixXd rows = c.generators.transpose();
            for (Eigen::Index j = 0; j < rows.rows(); ++j) {
              const double s = rows.row(j).cwiseAbs().maxCoeff();
              if (s > 0.0) rows.row(j) /= s;
            }
            return LinearDual{rows, 0};
          },
          [&](const cones::ShiftedBall& c) { return norm_rows(c.e, c.norm, false); },
          [&](const cones::TeCone& c) { return norm_rows(c.e, c.norm, true); },
          [](const cones::Psd&) -> std::optional<LinearDual> { return std::nullopt; },
      },
      cone);
}

std::optional<Eigen::VectorXd> find_dual_point(const Cone& cone, const Eigen::VectorXd& e,
                                               const Eigen::MatrixXd& basis,
                                               const Tolerances& tol) {
  const Eigen::Index n = dim(cone);
  require_dim(e.size(), n, "find_dual_point");
  require_dim(basis.rows(), n, "find_dual_point basis");
  const auto dual = linear_dual(cone);
  if (!dual) return std::nullopt;
  const Eigen::Index d = basis.cols();
  const Eigen::Index aux = dual->aux;
  // Variables: c (d, free), aux (>= 0), t (free). maximize t s.t. rows·[Vc; aux] >= t, e·Vc = 1, t <= 1.
  lp::LinearProgram prog(d + aux + 1);
  for (Eigen::Index j = 0; j < d; ++j) prog.set_free(j);
  prog.set_free(d + aux);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(d + aux + 1);
  cost[d + aux] = -1.0;
  prog.set_objective(cost);
  for (Eigen::Index r = 0; r < dual->rows.rows(); ++r) {
    Eigen::RowVectorXd row(d + aux + 1);
    row.head(d) = dual->rows.row(r).head(n) * basis;
    row.segment(d, aux) = dual->rows.row(r).tail(aux);
    row[d + aux] = -1.0;
    prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
  }
  Eigen::RowVectorXd norm_row = Eigen::RowVectorXd::Zero(d + aux + 1);
  norm_row.head(d) = e.transpose() * basis;
  prog.add_constraint(norm_row, lp::Relation::Equal, 1.0);
  Eigen::RowVectorXd cap = Eigen::RowVectorXd::Zero(d + aux + 1);
  cap[d + aux] = 1.0;
  prog.add_constraint(cap, lp::Relation::LessEqual, 1.0);

  const lp::Result res = prog.solve();
  if (res.status != lp::Status::Optimal) return std::nullopt;
  if (res.x[d + aux] < -tol.membership_tol) return std::nullopt;
  Eigen::VectorXd f = basis * res.x.head(d);
  if (!dual_contains(cone, f, tol)) return std::nullopt;
  return f;
}

}  // namespace krein
