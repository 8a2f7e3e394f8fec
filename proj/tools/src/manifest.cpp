#include "krein/manifest.hpp"

#include <Eigen/Core>
#include <openssl/evp.h>

#include <array>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace krein::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

void RunManifest::add_input(const std::string& source, const std::string& bytes) {
  inputs.emplace_back(source, sha256_hex(bytes));
}

nlohmann::json RunManifest::finish(int exit_code) const {
  nlohmann::json in = nlohmann::json::array();
  for (const auto& [source, digest] : inputs) in.push_back({{"source", source}, {"sha256", digest}});
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  nlohmann::json out{{"command_line", command_line},
                     {"inputs", in},
                     {"tolerances", tolerances},
                     {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)},
                     {"versions",
                      {{"krein", KREIN_VERSION},
                       {"eigen", eigen.str()},
                       {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                             std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                       {"compiler", __VERSION__}}},
                     {"wall_time_seconds", wall},
                     {"exit_code", exit_code}};
  return out;
}

}  // namespace krein::cli
