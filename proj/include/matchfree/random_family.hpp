#pragma once

#include "matchfree/family.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace matchfree {

struct RandomUpsetOptions {
    int attempts = 60;
    /// Probability that a candidate generator is a cyclic arc (1..n order)
    /// rather than a uniformly chosen set.
    double arc_bias = 0.6;
    /// Generator sizes are drawn around m: arcs from m-2..m+1, others from m-1..m+3.
    int m = 1;
    /// Shifts the lower end of both size ranges up to m (no generators below size m).
    bool no_small = false;
};

/// Up-set with nu < s built by greedy insertion of random generators: a
/// candidate A is kept iff the members avoiding A contain no s-1 pairwise
/// disjoint sets. Deterministic for a given engine state.
SetFamily random_upset(int n, int s, std::mt19937_64& rng, const RandomUpsetOptions& options);

/// Uniform random family (not closed) for property tests.
SetFamily random_family(int n, std::mt19937_64& rng, double density);

}  // namespace matchfree

namespace matchfree {

/// up(generators) together with every set of size >= m+1, then trimmed: while
/// some s pairwise disjoint members exist, the largest one not above a
/// generator is removed with all its subsets. Empty optional when a disjoint
/// s-tuple sits entirely above the generators.
std::optional<SetFamily> complete_with_large_sets(int n, int s, int m, const std::vector<ElementSet>& generators);

struct NamedFamily {
    std::string label;
    /// Expected Stage-5 configuration: "shared-1a" or "two-1b".
    std::string special_case;
    SetFamily family;
};

/// Hand-built q = m+1, z2 = 2 families at n = 10, s = 3: both configurations,
/// each with and without an (m-1)-arc.
std::vector<NamedFamily> stage5_special_families();

}  // namespace matchfree
