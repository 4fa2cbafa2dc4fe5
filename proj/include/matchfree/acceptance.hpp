#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace matchfree {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0;
    double limit_seconds = 0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240601;
    /// Criteria to run (1..8); empty means all.
    std::vector<int> only;
    /// Called after each criterion, e.g. to print progress.
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "PASS [3] title: detail (0.12 s, limit 60 s)"
std::string format_result(const CriterionResult& r);

}  // namespace matchfree
