#pragma once

#include "matchfree/family.hpp"

#include <chrono>
#include <optional>
#include <string>

namespace matchfree {

struct SolveOptions {
    std::chrono::duration<double> budget = std::chrono::seconds(60);
    /// Restrict to families closed under i<j element shifts. Off by default;
    /// it relies on shifting not increasing the matching number.
    bool shifted_only = false;
};

struct SolveResult {
    int n = 0;
    int s = 0;
    long long value = 0;
    /// Upper bound on e(n, s) proven by the search; equals value when optimal.
    long long upper_bound = 0;
    SetFamily witness;
    bool optimal = false;
    long long nodes_explored = 0;
    std::chrono::duration<double> elapsed{};
};

/// Exact e(n, s) by branch-and-bound over the complement down-set, which must
/// contain a block of every partition of [n] into s non-empty blocks (and the
/// empty set). Budget exhaustion is reported through optimal = false.
SolveResult solve_exact(int n, int s, const SolveOptions& options = {});

struct FamilyReport {
    int n = 0;
    int s = 0;
    long long size = 0;
    /// min(nu, s). A member empty set counts as one more disjoint member.
    int nu = 0;
    bool contains_empty = false;
    bool is_upset = false;
    /// Compared against e_formula(n, s) when the residue class is supported:
    /// true iff nu < s and size equals the closed form.
    std::optional<bool> matches_formula;
    std::optional<long long> formula_value;
};

FamilyReport verify_family(const SetFamily& fam, int s);
FamilyReport verify_family_file(const std::string& path, int s);

}  // namespace matchfree
