#pragma once

#include "krein/cone.hpp"
#include "krein/contraction_face.hpp"
#include "krein/krein_solver.hpp"
#include "krein/l1_criterion.hpp"
#include "krein/matrix_order.hpp"
#include "krein/norm.hpp"
#include "krein/oracle.hpp"
#include "krein/errors.hpp"

#include <json.hpp>

#include <string>
#include <vector>

// JSON wire formats. Indices are one-based on the wire and zero-based in the library.
namespace krein::io {

using Json = nlohmann::json;

/// Input does not follow the documented schema (or is not JSON at all).
class ParseError : public Error {
 public:
  using Error::Error;
};

Json parse_text(const std::string& text);
Json read_file(const std::string& path);

Eigen::VectorXd parse_vector(const Json& j);  // {"data":[...]} or a bare array
Eigen::MatrixXd parse_matrix(const Json& j);  // {"rows","cols","data":[[row],...]} or a bare array of rows
Norm parse_norm(const Json& j);               // "l1" | "linf" | "l2" | {"kind":"weighted_sup","weights":[...]}
Cone parse_cone(const Json& j);               // {"kind": ..., "params": {...}}
CMatrix parse_complex_matrix(const Json& j);  // entries are numbers or [re, im]
std::vector<CMatrix> parse_kraus(const Json& j);  // {"kraus":[...]} or a bare array
CMatrix parse_choi(const Json& j);            // requires "basis": "row_major_matrix_units"

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const CMatrix& m);
Json to_json(const Norm& norm);
Json to_json(const Cone& cone);
Json to_json(const DualEigenpair& pair);
Json to_json(const CommonEigenvector& common);
Json to_json(const CriterionWitness& w);
Json to_json(const FaceDescription& face);
Json to_json(const FaceTheoremReport& report);
Json to_json(const PositivityVerdict& verdict);
Json to_json(const FixedState& state);
Json to_json(const oracle::TrialRecord& record);
Json to_json(const oracle::DifferentialSummary& summary);

}  // namespace krein::io
