#pragma once

#include <string>
#include <vector>

#include "qc/config.hpp"

namespace qc {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The full invariant suite (every module's Invariants & Properties bullets
/// at validation scale).  Deterministic under a fixed config seed.
std::vector<CheckResult> run_validation_suite(const ExperimentConfig& cfg);

std::string validation_report_json(const ExperimentConfig& cfg,
                                   const std::vector<CheckResult>& results);

}  // namespace qc
