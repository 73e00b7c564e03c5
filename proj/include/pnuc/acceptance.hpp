#pragma once

// The acceptance battery: seeded property and oracle checks over every
// module, with a deterministic JSON report.

#include <pnuc/io.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pnuc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  Json data = Json::object();
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240607;
};

using CriterionFn = std::function<CriterionResult(const AcceptanceOptions&)>;

/// Criteria 1..12 in order; determinism (13) is checked by running these twice.
const std::vector<std::pair<int, CriterionFn>>& acceptance_criteria();

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& progress = {});

Json acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opts);

}  // namespace pnuc
