#include "krein/io.hpp"

#include <fstream>
#include <sstream>

namespace krein::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return j.get<double>();
}

Eigen::Index count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(std::string(what) + ": expected a nonnegative integer");
  }
  return static_cast<Eigen::Index>(j.get<long long>());
}

std::complex<double> complex_entry(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("complex entry: expected a number or [re, im]");
}

template <class Entry, class M>
M parse_grid(const Json& j, Entry entry) {
  const Json& data = j.is_array() ? j : field(j, "data");
  if (!data.is_array()) throw ParseError("matrix data: expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(data.size());
  Eigen::Index cols = rows ? -1 : 0;
  for (const auto& row : data) {
    if (!row.is_array()) throw ParseError("matrix data: every row must be an array");
    if (cols < 0) cols = static_cast<Eigen::Index>(row.size());
    if (static_cast<Eigen::Index>(row.size()) != cols) throw DimensionError("matrix data: ragged rows");
  }
  if (j.is_object()) {
    if (j.contains("rows")) require_dim(rows, count(j.at("rows"), "rows"), "matrix rows");
    if (j.contains("cols")) require_dim(cols, count(j.at("cols"), "cols"), "matrix cols");
  }
  M m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry(data[static_cast<size_t>(r)][static_cast<size_t>(c)]);
  return m;
}

Eigen::Index one_based(const Json& j, const char* what) {
  const Eigen::Index k = count(j, what);
  if (k < 1) throw ParseError(std::string(what) + ": indices are one-based");
  return k - 1;
}

}  // namespace

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw ParseError(std::string("malformed JSON: ") + ex.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_text(buf.str());
  } catch (const ParseError& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

Eigen::VectorXd parse_vector(const Json& j) {
  const Json& data = j.is_array() ? j : field(j, "data");
  if (!data.is_array()) throw ParseError("vector data: expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(data.size()));
  for (size_t i = 0; i < data.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(data[i], "vector entry");
  return v;
}

Eigen::MatrixXd parse_matrix(const Json& j) {
  return parse_grid<double(const Json&), Eigen::MatrixXd>(
      j, [](const Json& x) { return number(x, "matrix entry"); });
}

CMatrix parse_complex_matrix(const Json& j) { return parse_grid<decltype(complex_entry), CMatrix>(j, complex_entry); }

Norm parse_norm(const Json& j) {
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object() && field(j, "kind").is_string()) {
    kind = j.at("kind").get<std::string>();
  } else {
    throw ParseError("norm: expected a name or {\"kind\": ...}");
  }
  if (kind == "l1") return Norm::l1();
  if (kind == "linf") return Norm::linf();
  if (kind == "l2") return Norm::l2();
  if (kind == "weighted_sup") {
    if (!j.is_object()) throw ParseError("weighted_sup norm needs \"weights\"");
    return Norm::weighted_sup(parse_vector(field(j, "weights")));
  }
  throw ParseError("unknown norm '" + kind + "'");
}

Cone parse_cone(const Json& j) {
  const Json& kind_j = field(j, "kind");
  if (!kind_j.is_string()) throw ParseError("cone kind: expected a string");
  const std::string kind = kind_j.get<std::string>();
  static const Json empty = Json::object();
  const Json& params = j.contains("params") ? j.at("params") : empty;
  if (!params.is_object()) throw ParseError("cone params: expected an object");
  if (kind == "orthant") return make_orthant(count(field(params, "n"), "n"));
  if (kind == "l1krein") {
    return make_l1_krein(count(field(params, "n"), "n"), one_based(field(params, "k"), "k"));
  }
  if (kind == "polyhedral") {
    // Generators are listed one per row and stored as columns.
    return make_polyhedral(parse_matrix(field(params, "generators")).transpose());
  }
  if (kind == "shifted_ball") {
    return make_shifted_ball(parse_vector(field(params, "e")), parse_norm(field(params, "norm")));
  }
  if (kind == "te_cone") return make_te_cone(parse_vector(field(params, "e")), parse_norm(field(params, "norm")));
  if (kind == "psd") return make_psd(count(field(params, "order"), "order"));
  throw ParseError("unknown cone kind '" + kind + "'");
}

std::vector<CMatrix> parse_kraus(const Json& j) {
  const Json& list = j.is_array() ? j : field(j, "kraus");
  if (!list.is_array() || list.empty()) throw ParseError("kraus: expected a non-empty array of matrices");
  std::vector<CMatrix> out;
  for (const auto& m : list) out.push_back(parse_complex_matrix(m));
  return out;
}

CMatrix parse_choi(const Json& j) {
  const Json& basis = field(j, "basis");
  if (!basis.is_string() || basis.get<std::string>() != "row_major_matrix_units") {
    throw ParseError("choi: \"basis\" must be \"row_major_matrix_units\"");
  }
  return parse_complex_matrix(j);
}

Json to_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) data.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    data.push_back(row);
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Json to_json(const Norm& norm) {
  if (norm.kind() == Norm::Kind::WeightedSup) return Json{{"kind", "weighted_sup"}, {"weights", to_json(norm.weights())}};
  return norm.name();
}

Json to_json(const Cone& cone) {
  Json params = Json::object();
  if (const auto* c = std::get_if<cones::Orthant>(&cone)) params["n"] = c->n;
  if (const auto* c = std::get_if<cones::L1Krein>(&cone)) params = {{"n", c->n}, {"k", c->k + 1}};
  if (const auto* c = std::get_if<cones::Polyhedral>(&cone)) {
    params["generators"] = to_json(Eigen::MatrixXd(c->generators.transpose()));
  }
  if (const auto* c = std::get_if<cones::ShiftedBall>(&cone)) params = {{"e", to_json(c->e)}, {"norm", to_json(c->norm)}};
  if (const auto* c = std::get_if<cones::TeCone>(&cone)) params = {{"e", to_json(c->e)}, {"norm", to_json(c->norm)}};
  if (const auto* c = std::get_if<cones::Psd>(&cone)) params["order"] = c->order;
  return Json{{"kind", kind_name(cone)}, {"params", params}};
}

Json to_json(const DualEigenpair& pair) {
  return Json{{"lambda", pair.lambda},
              {"h", to_json(pair.h)},
              {"residual", pair.residual},
              {"iterations", pair.iterations},
              {"method", to_string(pair.method)}};
}

Json to_json(const CommonEigenvector& common) {
  return Json{{"h", to_json(common.h)},
              {"lambdas", common.lambdas},
              {"residuals", common.residuals},
              {"iterations", common.iterations}};
}

Json to_json(const CriterionWitness& w) {
  return Json{{"k", w.k + 1}, {"j", w.j + 1}, {"sign", w.sign > 0 ? "+" : "-"}, {"lhs", w.lhs}, {"rhs", w.rhs}};
}

Json to_json(const FaceDescription& face) {
  std::vector<Eigen::Index> zero_set;
  for (Eigen::Index i : face.zero_set) zero_set.push_back(i + 1);
  Json witnesses = Json::array();
  for (const auto& w : face.witnesses) witnesses.push_back(to_json(w));
  Json out{{"kind", to_string(face.kind)},
           {"zero_set", zero_set},
           {"witnesses", witnesses},
           {"trivial", face.trivial}};
  if (!face.note.empty()) out["note"] = face.note;
  return out;
}

Json to_json(const FaceTheoremReport& r) {
  Json out = to_json(r.face);
  Json separation = Json::array();
  for (const auto& s : r.separation) {
    separation.push_back(
        {{"distance", s.distance}, {"quotient", s.quotient}, {"alpha", s.alpha}, {"chain_bound", s.chain_bound}});
  }
  out["checks"] = Json{{"growth_in_face", r.growth_in_face},
                       {"invariant", r.invariant},
                       {"additive", r.additive},
                       {"hereditary", r.hereditary},
                       {"e_outside", r.e_outside},
                       {"ideal_invariant", r.ideal_invariant},
                       {"separation_ok", r.separation_ok},
                       {"separation_min", r.separation_min},
                       {"separation_threshold", r.separation_threshold},
                       {"chain_bound_min", r.chain_bound_min},
                       {"samples", r.samples},
                       {"all_pass", r.all_pass()}};
  out["e"] = to_json(r.e);
  out["growth"] = to_json(r.growth);
  out["operator_norm"] = r.operator_norm;
  out["separation_samples"] = separation;
  return out;
}

Json to_json(const PositivityVerdict& v) {
  Json out{{"level", to_string(v.level)}, {"choi_min_eigenvalue", v.choi_min_eigenvalue}, {"trials", v.trials}};
  if (v.witness) {
    Json w = Json::array();
    for (Eigen::Index i = 0; i < v.witness->size(); ++i) w.push_back({(*v.witness)[i].real(), (*v.witness)[i].imag()});
    out["witness"] = w;
    out["witness_min_eigenvalue"] = v.witness_min_eigenvalue;
  }
  return out;
}

Json to_json(const FixedState& s) {
  return Json{{"lambda", s.lambda},
              {"rho", to_json(s.rho)},
              {"residual", s.residual},
              {"min_eigenvalue", s.min_eigenvalue},
              {"iterations", s.iterations},
              {"method", s.method}};
}

Json to_json(const oracle::TrialRecord& r) {
  Json out{{"index", r.index},
           {"seed", r.seed},
           {"agree", r.agree},
           {"lambda_solver", r.lambda_solver},
           {"lambda_oracle", r.lambda_oracle},
           {"relative_error", r.relative_error},
           {"residual", r.residual}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

Json to_json(const oracle::DifferentialSummary& s) {
  Json failures = Json::array();
  for (const auto& f : s.failures) failures.push_back(to_json(f));
  Json out{{"family", oracle::to_string(s.family)},
           {"n", s.n},
           {"trials", s.trials},
           {"agreements", s.agreements},
           {"worst_relative_error", s.worst_relative_error},
           {"worst_residual", s.worst_residual},
           {"failures", failures}};
  if (!s.records.empty()) {
    Json records = Json::array();
    for (const auto& r : s.records) records.push_back(to_json(r));
    out["records"] = records;
  }
  return out;
}

}  // namespace krein::io
