#pragma once

#include "matchfree/rational.hpp"

#include <string>
#include <vector>

namespace matchfree {

struct InequalityRecord {
    std::string id;
    int s = 0;
    int m = 0;
    int k = -1;  // -1 when the bound has no k or q parameter
    bool holds = false;
    /// The bound is an empty sum at this m.
    bool vacuous = false;
    /// m lies in the stated validity range of the bound.
    bool in_range = true;
    /// Fails outside its validity range (data, not an error).
    bool expected_fail = false;
    /// Exact equality is claimed; holds additionally requires margin == 0.
    bool equality = false;
    /// rhs - lhs; strict bounds require it positive.
    Rational margin;
};

struct AuditOptions {
    /// One eq005 record per k; otherwise one per m holding the smallest margin.
    bool expand_k = false;
};

/// Evaluates every algebraic bound of the s = 3 or s = 4 argument for m = 1..m_max.
std::vector<InequalityRecord> audit(int s, int m_max, const AuditOptions& options = {});

/// CSV with columns id,s,m,k,holds,vacuous,margin.
std::string audit_csv(const std::vector<InequalityRecord>& records);

}  // namespace matchfree
