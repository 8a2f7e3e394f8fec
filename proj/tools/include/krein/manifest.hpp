#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace krein::cli {

std::string sha256_hex(const std::string& bytes);

/// Reproducibility record written for every run.
struct RunManifest {
  std::vector<std::string> command_line;
  std::vector<std::pair<std::string, std::string>> inputs;  // (source, sha256 of its bytes)
  nlohmann::json tolerances = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void add_input(const std::string& source, const std::string& bytes);
  nlohmann::json finish(int exit_code) const;
};

}  // namespace krein::cli
