#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nil/parallel.hpp"

namespace nil {

struct CheckResult {
  std::string id;        // what is being measured
  double measured = 0;   // worst value seen
  double tolerance = 0;  // pinned acceptance threshold
  bool pass = false;
  std::string note;      // optional detail
};

// Named invariant suites with deterministic sampling. "all" runs every suite.
std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed,
                                   const ParallelOptions& par = {});

std::vector<std::string> suite_names();

// Reference triangle used across the suites (vertices from the worked example
// configuration): (1,0,0), (1/3,2,1), (1/2,-1,1).
void reference_triangle(double out[3][3]);

}  // namespace nil
