#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krein::cli {

enum ExitCode : int {
  kOk = 0,
  kRejected = 1,        // criterion not satisfied
  kHypothesis = 2,      // a hypothesis of the underlying theorem failed
  kSolver = 3,          // no certified answer
  kMalformed = 64,      // malformed JSON or command line
  kDataError = 65,      // dimension mismatch or invalid values
  kInternal = 70,
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace krein::cli
