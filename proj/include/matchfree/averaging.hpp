#pragma once

#include "matchfree/config.hpp"
#include "matchfree/family.hpp"

#include <vector>

namespace matchfree {

struct AveragingLayer {
    int layer = 0;
    /// (1/n!) * sum over sigma of the weight of fam's j-sets inside G(sigma).
    Rational average;
    /// s * n * |fam on layer j|
    Rational expected;
};

struct AveragingReport {
    int n = 0, s = 0, m = 0;
    Variant variant = Variant::Full;
    long long permutations = 0;
    std::vector<AveragingLayer> layers;
    Rational average_total;
    Rational expected_total;
    bool holds = false;
};

/// Exhaustive check over all n! orders (n <= 8) that the average weighted
/// intersection equals s*n times the number of members on weighted layers.
/// Work is split by the first element of the order across `threads` workers;
/// the sums are exact, so the result does not depend on the split.
AveragingReport averaging_identity(const SetFamily& fam, int s, int m, Variant variant = Variant::Full,
                                   int threads = 1);

}  // namespace matchfree
