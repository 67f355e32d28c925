#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Named verification checks covering the closed-form identities and the
// Monte Carlo cross-checks.  Each check reports the measured residual (or
// p-value) against its threshold; `reccalc verify` prints the table.

namespace reccalc::verify {

struct CheckResult {
  std::string name;
  std::string suite;   // "identities" or "mc"
  bool passed = false;
  double measured = 0.0;   // residual (pass if <= threshold) or p-value /
                           // z-score depending on mode
  double threshold = 0.0;
  std::string mode;        // "resid" (measured <= threshold),
                           // "p" (measured > threshold),
                           // "sigma" (measured <= threshold)
  std::string detail;
};

// suite: "all", "identities" or "mc".
std::vector<CheckResult> run_checks(const std::string& suite,
                                    std::uint64_t seed, unsigned workers);

}  // namespace reccalc::verify
