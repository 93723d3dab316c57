#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dslpn/report.hpp"
#include "dslpn/rng.hpp"

namespace dslpn {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;  // wall time; never written to reports
};

struct AcceptanceOptions {
  Seed seed;
  std::size_t workers = 1;
  // Directory for the two reproducibility reports; empty uses the temp dir.
  std::string workDir;
  // Called after each criterion (progress output).
  std::function<void(const CriterionResult&)> onResult;
};

inline constexpr int kCriteria = 13;

// Criteria 1..12 with their measured values recorded under "cNN." keys.
// Results depend only on the seed, not on the worker count.
std::vector<CriterionResult> runCriteria(const AcceptanceOptions& options, Report& report);

// All 13: criteria 1..12, then 13 reruns them with a different worker count,
// writes both reports and compares the files byte for byte. `report` receives
// the first run plus the criterion-13 entries.
std::vector<CriterionResult> runAcceptance(const AcceptanceOptions& options, Report& report);

std::string formatResultLine(const CriterionResult& r);

}  // namespace dslpn
