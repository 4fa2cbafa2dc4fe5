#pragma once

#include "matchfree/family.hpp"
#include "matchfree/rational.hpp"

#include <string>

namespace matchfree {

/// Closed-form maximum size of a family in 2^[n] without s pairwise disjoint members.
struct ExtremalValue {
    int n = 0;
    int s = 0;
    int m = 0;
    Integer value;
    ResidueClass residue = ResidueClass::Sm;
    /// Non-empty when the value rests on a result not reproduced here (class sm+s-2 with s >= 5).
    std::string note;
};

/// Throws UnsupportedResidue unless n is sm-1, sm or sm+s-2 with m >= 1.
ExtremalValue e_formula(int n, int s);

/// All sets of size >= m for n = sm-1; {|K| >= m+1} plus the m-subsets of [sm-1] for n = sm.
SetFamily kleitman_family(int n, int s);

/// {|L| >= m+1} plus the m-sets containing 1, for n = sm+s-2 and s >= 3.
SetFamily theorem_family(int n, int s);

/// The construction matching e_formula for (n, s): Kleitman's family or the theorem family.
SetFamily extremal_construction(int n, int s);

}  // namespace matchfree
