// Runtime self-check: re-derives the cross-track invariants that make the
// three computation tracks trustworthy, with fixed inputs so output bytes
// are identical run to run.
#pragma once

#include <string>
#include <vector>

namespace weakwalk {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;  // worst deviation and where it occurred
};

std::vector<CheckResult> run_invariant_suite();

}  // namespace weakwalk
