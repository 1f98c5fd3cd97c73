#pragma once

// Named invariant checks across all modules, run at one (N, M).

#include <cstdint>
#include <string>
#include <vector>

#include "wehrl/combinatorics.hpp"
#include "wehrl/io.hpp"

namespace wehrl {

enum class VerifyLevel { quick, full };

VerifyLevel parse_level(const std::string& s);
std::string to_string(VerifyLevel level);

struct InvariantResult {
  std::string name;
  bool pass = false;
  json measured;  // the numbers behind the verdict
};

struct VerifyReport {
  Params params;
  VerifyLevel level;
  std::uint64_t seed = 0;
  std::vector<InvariantResult> results;

  bool all_pass() const;
};

/// quick: closed forms, signs, optimizer and a few small pipelines.
/// full: adds Monte Carlo cross-checks, finite differences and scans.
VerifyReport run_verify(const Params& params, VerifyLevel level, std::uint64_t seed = 0);

json to_json(const VerifyReport& r);

}  // namespace wehrl
