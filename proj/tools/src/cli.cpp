#include "krein/cli.hpp"

#include "krein/io.hpp"
#include "krein/manifest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace krein::cli {

namespace {

using io::Json;

struct Context {
  RunManifest manifest;
  std::ostream& out;

  // Arguments starting with '[', '{' or '"' are inline JSON; anything else is a file path.
  Json load(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    std::string bytes;
    std::string source;
    if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{' || arg[first] == '"')) {
      bytes = arg.substr(first);
      source = "inline";
    } else {
      std::ifstream in(arg, std::ios::binary);
      if (!in) throw io::ParseError("cannot open '" + arg + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      bytes = buf.str();
      source = arg;
    }
    manifest.add_input(source, bytes);
    try {
      return io::parse_text(bytes);
    } catch (const io::ParseError& ex) {
      throw io::ParseError(source + ": " + ex.what());
    }
  }

  void emit(const Json& j) { out << j.dump(2) << '\n'; }
};

struct TolOptions {
  double membership = 1e-9;
  double residual = 1e-8;
  double alpha_probe = 1e-7;
  long max_iter = 20000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol", residual, "residual tolerance")->capture_default_str();
    cmd->add_option("--membership-tol", membership, "relative cone-membership tolerance")->capture_default_str();
    cmd->add_option("--alpha-probe", alpha_probe, "first step of the derivative descent")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
  }
  Tolerances tolerances() const {
    Tolerances t{membership, residual, alpha_probe};
    t.validate();
    return t;
  }
  SolverOptions solver(Fallback fallback = Fallback::Auto) const {
    SolverOptions o;
    o.tol = tolerances();
    o.max_iter = max_iter;
    o.fallback = fallback;
    return o;
  }
  Json json() const {
    return Json{{"membership_tol", membership}, {"residual_tol", residual}, {"alpha_probe", alpha_probe},
                {"max_iter", max_iter}};
  }
};

Norm default_norm(const Cone& cone) {
  if (const auto* c = std::get_if<cones::ShiftedBall>(&cone)) return c->norm;
  if (const auto* c = std::get_if<cones::TeCone>(&cone)) return c->norm;
  if (std::holds_alternative<cones::L1Krein>(cone)) return Norm::l1();
  return Norm::linf();
}

Fallback parse_fallback(const std::string& s) {
  if (s == "auto") return Fallback::Auto;
  if (s == "never") return Fallback::Never;
  if (s == "always") return Fallback::Always;
  throw InvalidArgument("--fallback must be auto, never or always");
}

Json norm_from_arg(Context& ctx, const std::string& arg) {
  if (arg == "l1" || arg == "linf" || arg == "l2") return Json(arg);
  return ctx.load(arg);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{RunManifest{}, out};
  ctx.manifest.command_line.push_back("krein");
  ctx.manifest.command_line.insert(ctx.manifest.command_line.end(), args.begin(), args.end());

  CLI::App app{"Positive eigenvectors of adjoints of cone-preserving operators"};
  app.require_subcommand(1);
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "write the run manifest here instead of stderr");
  TolOptions tol;

  // solve
  auto* solve = app.add_subcommand("solve", "dual-cone eigenvector of Tᵀ");
  std::string s_matrix, s_cone, s_e, s_norm, s_fallback = "auto";
  bool s_assume = false;
  solve->add_option("--matrix", s_matrix, "matrix JSON")->required();
  solve->add_option("--cone", s_cone, "cone JSON")->required();
  solve->add_option("--e", s_e, "dominating point JSON")->required();
  solve->add_option("--norm", s_norm, "norm name or JSON (default follows the cone)");
  solve->add_option("--fallback", s_fallback, "auto | never | always")->capture_default_str();
  solve->add_flag("--assume-hypotheses", s_assume, "skip the positivity and dominance checks");
  tol.attach(solve);

  // criterion
  auto* crit = app.add_subcommand("criterion", "ℓ1 matrix criterion");
  std::string c_matrix;
  long c_k = 0;
  crit->add_option("--matrix", c_matrix, "matrix JSON")->required();
  crit->add_option("--k", c_k, "one-based index to test (default: search)");
  tol.attach(crit);

  // face
  auto* face = app.add_subcommand("face", "invariant face of the positive cone");
  std::string f_norm = "linf", f_e, f_matrix;
  long f_samples = 200;
  std::uint64_t f_seed = 0x5eed;
  face->add_option("--norm", f_norm, "norm name or JSON")->capture_default_str();
  face->add_option("--e", f_e, "vector JSON")->required();
  face->add_option("--matrix", f_matrix, "operator JSON; adds the full theorem report");
  face->add_option("--samples", f_samples, "sampled face pairs")->capture_default_str();
  face->add_option("--seed", f_seed, "sampling seed")->capture_default_str();
  tol.attach(face);

  // te-solve
  auto* te = app.add_subcommand("te-solve", "eigenvector for ‖T‖ = 1, Te >= e");
  std::string t_matrix, t_e, t_norm = "linf";
  te->add_option("--matrix", t_matrix, "matrix JSON")->required();
  te->add_option("--e", t_e, "vector JSON")->required();
  te->add_option("--norm", t_norm, "norm name or JSON")->capture_default_str();
  tol.attach(te);

  // channel
  auto* channel = app.add_subcommand("channel", "positive map on M_n: positivity verdict and fixed state");
  std::string ch_kraus, ch_choi, ch_action;
  long ch_trials = 500;
  std::uint64_t ch_seed = 0x5eed;
  auto* o_kraus = channel->add_option("--kraus", ch_kraus, "Kraus list JSON");
  auto* o_choi = channel->add_option("--choi", ch_choi, "Choi matrix JSON");
  auto* o_action = channel->add_option("--action", ch_action, "n²×n² action matrix JSON");
  o_kraus->excludes(o_choi)->excludes(o_action);
  o_choi->excludes(o_action);
  channel->add_option("--trials", ch_trials, "random rank-one probes")->capture_default_str();
  channel->add_option("--seed", ch_seed, "probe seed")->capture_default_str();
  tol.attach(channel);

  // common
  auto* common = app.add_subcommand("common", "common eigenvector of a commuting family");
  std::vector<std::string> m_matrices;
  std::string m_cone, m_e, m_norm;
  common->add_option("--matrices", m_matrices, "matrix JSON files or inline arrays")->required();
  common->add_option("--cone", m_cone, "cone JSON (default orthant)");
  common->add_option("--e", m_e, "dominating point JSON (default all ones)");
  common->add_option("--norm", m_norm, "norm name or JSON (default follows the cone)");
  tol.attach(common);

  // oracle
  auto* orc = app.add_subcommand("oracle", "differential run against the dense oracle");
  std::string o_family;
  long o_n = 3, o_trials = 100;
  std::uint64_t o_seed = 42;
  bool o_verbose = false;
  orc->add_option("--family", o_family, "instance family")->required();
  orc->add_option("--n", o_n, "dimension")->capture_default_str();
  orc->add_option("--trials", o_trials, "number of trials")->capture_default_str();
  orc->add_option("--seed", o_seed, "master seed")->capture_default_str();
  orc->add_flag("--verbose", o_verbose, "include per-trial records");

  int code = kOk;
  try {
    bool parsed = true;
    try {
      // CLI11 splits "[a,b]" values of multi-value options at commas; a leading space keeps
      // inline JSON arrays whole (Context::load skips it).
      std::vector<std::string> reversed;
      for (auto it = args.rbegin(); it != args.rend(); ++it) reversed.push_back(it->starts_with('[') ? " " + *it : *it);
      app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
      parsed = false;
      code = app.exit(ex, out, err) == 0 ? kOk : kMalformed;  // --help exits 0
    }
    ctx.manifest.tolerances = tol.json();

    if (!parsed) {
    } else if (*solve) {
      const Cone cone = io::parse_cone(ctx.load(s_cone));
      const Norm norm = s_norm.empty() ? default_norm(cone) : io::parse_norm(norm_from_arg(ctx, s_norm));
      const Eigen::MatrixXd m = io::parse_matrix(ctx.load(s_matrix));
      const Eigen::VectorXd e = io::parse_vector(ctx.load(s_e));
      const PositiveOperator op = make_positive_operator(m, cone, e, norm, tol.tolerances(), s_assume);
      Json j = io::to_json(solve_dual_eigenvector(op, tol.solver(parse_fallback(s_fallback))));
      j["positivity_exhaustive"] = op.positivity_exhaustive;
      j["dominance_exhaustive"] = op.dominance_exhaustive;
      j["hypotheses_assumed"] = op.hypotheses_assumed;
      ctx.emit(j);
    } else if (*crit) {
      const L1Matrix m(io::parse_matrix(ctx.load(c_matrix)));
      const double t = tol.membership;
      if (c_k != 0) {
        if (c_k < 1 || c_k > m.size()) throw InvalidArgument("--k must lie in 1.." + std::to_string(m.size()));
        const auto k = static_cast<Eigen::Index>(c_k - 1);
        const auto violation = criterion_violation(m, k, t);
        Json j{{"satisfied", !violation}, {"k", c_k}};
        if (violation) {
          j["witness"] = io::to_json(*violation);
          code = kRejected;
        } else {
          j["invariance"] = criterion_implies_invariance(m, k, t);
        }
        ctx.emit(j);
      } else if (const auto k = find_certificate_index(m, t)) {
        ctx.emit(Json{{"satisfied", true}, {"k", *k + 1}, {"invariance", criterion_implies_invariance(m, *k, t)}});
      } else {
        Json witnesses = Json::array();
        for (Eigen::Index k = 0; k < m.size(); ++k) witnesses.push_back(io::to_json(*criterion_violation(m, k, t)));
        ctx.emit(Json{{"satisfied", false}, {"k", nullptr}, {"witnesses", witnesses}});
        code = kRejected;
      }
    } else if (*face) {
      ctx.manifest.seed = f_seed;
      const Norm norm = io::parse_norm(norm_from_arg(ctx, f_norm));
      const Eigen::VectorXd e = io::parse_vector(ctx.load(f_e));
      if (f_matrix.empty()) {
        ctx.emit(io::to_json(compute_face(norm, e, tol.tolerances())));
      } else {
        const Eigen::MatrixXd m = io::parse_matrix(ctx.load(f_matrix));
        const auto report = verify_face_theorem(m, e, make_monotone_space(e.size(), norm), tol.tolerances(),
                                                f_samples, f_seed);
        ctx.emit(io::to_json(report));
        if (!report.all_pass()) code = kSolver;
      }
    } else if (*te) {
      const Norm norm = io::parse_norm(norm_from_arg(ctx, t_norm));
      const Eigen::MatrixXd m = io::parse_matrix(ctx.load(t_matrix));
      const Eigen::VectorXd e = io::parse_vector(ctx.load(t_e));
      ctx.emit(io::to_json(solve_te_eigenvector(m, e, make_monotone_space(e.size(), norm), tol.solver())));
    } else if (*channel) {
      ctx.manifest.seed = ch_seed;
      SuperOp phi;
      if (!ch_kraus.empty()) {
        phi = superop_from_kraus(io::parse_kraus(ctx.load(ch_kraus)));
      } else if (!ch_choi.empty()) {
        phi = superop_from_choi(io::parse_choi(ctx.load(ch_choi)));
      } else if (!ch_action.empty()) {
        phi = superop_from_action(io::parse_complex_matrix(ctx.load(ch_action)));
      } else {
        throw io::ParseError("channel needs one of --kraus, --choi, --action");
      }
      check_consistency(phi);
      const PositivityVerdict verdict = is_positive_map(phi, ch_trials, ch_seed);
      Json j{{"positivity", io::to_json(verdict)}};
      if (verdict.level == PositivityLevel::Falsified) {
        j["error"] = "the map is not positive: Φ(vv†) has a negative eigenvalue for the witness v";
        ctx.emit(j);
        code = kHypothesis;
      } else {
        j["fixed_state"] = io::to_json(fixed_state(phi, tol.residual, tol.max_iter));
        ctx.emit(j);
      }
    } else if (*common) {
      CommutingFamily fam;
      std::optional<Cone> cone;
      if (!m_cone.empty()) cone = io::parse_cone(ctx.load(m_cone));
      std::optional<Eigen::VectorXd> e;
      if (!m_e.empty()) e = io::parse_vector(ctx.load(m_e));
      std::optional<Norm> norm;
      if (!m_norm.empty()) norm = io::parse_norm(norm_from_arg(ctx, m_norm));
      for (const auto& path : m_matrices) {
        const Eigen::MatrixXd m = io::parse_matrix(ctx.load(path));
        if (!cone) cone = make_orthant(m.rows());
        if (!e) e = Eigen::VectorXd::Ones(m.rows());
        if (!norm) norm = default_norm(*cone);
        fam.operators.push_back(make_positive_operator(m, *cone, *e, *norm, tol.tolerances()));
      }
      ctx.emit(io::to_json(common_eigenvector(fam, tol.solver())));
    } else if (*orc) {
      ctx.manifest.seed = o_seed;
      const auto family = oracle::family_from_string(o_family);
      const auto summary = oracle::differential_run(family, o_n, o_trials, o_seed, o_verbose);
      ctx.emit(io::to_json(summary));
      if (summary.agreements != summary.trials) code = kSolver;
    }
  } catch (const io::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    code = kMalformed;
  } catch (const Json::exception& ex) {
    err << "error: malformed input: " << ex.what() << '\n';
    code = kMalformed;
  } catch (const DimensionError& ex) {
    err << "error: " << ex.what() << '\n';
    code = kDataError;
  } catch (const InvalidArgument& ex) {
    err << "error: " << ex.what() << '\n';
    code = kDataError;
  } catch (const HypothesisError& ex) {
    Json j{{"error", "hypothesis"}, {"message", ex.what()}};
    if (ex.witness()) j["witness"] = io::to_json(*ex.witness());
    out << j.dump(2) << '\n';
    err << "hypothesis rejected: " << ex.what() << '\n';
    code = kHypothesis;
  } catch (const SolverError& ex) {
    Json j{{"error", "solver"}, {"message", ex.what()}, {"best_residual", ex.best_residual()}};
    out << j.dump(2) << '\n';
    err << "solver failure: " << ex.what() << '\n';
    code = kSolver;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    code = kInternal;
  }

  const Json manifest = ctx.manifest.finish(code);
  if (manifest_path.empty()) {
    err << manifest.dump() << '\n';
  } else {
    std::ofstream mf(manifest_path);
    mf << manifest.dump(2) << '\n';
  }
  return code;
}

}  // namespace krein::cli
