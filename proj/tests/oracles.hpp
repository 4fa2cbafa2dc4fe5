#pragma once

// Independent reference implementations, kept deliberately naive.

#include "matchfree/family.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

inline std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

// plain DFS over member lists
inline int nu_rec(const std::vector<std::uint32_t>& sets, std::size_t from, std::uint32_t used, int depth, int cap) {
    int best = depth;
    for (std::size_t i = from; i < sets.size() && best < cap; ++i)
        if ((sets[i] & used) == 0) best = std::max(best, nu_rec(sets, i + 1, used | sets[i], depth + 1, cap));
    return best;
}

inline int nu(const matchfree::SetFamily& fam, int cap) {
    std::vector<std::uint32_t> sets;
    for (auto s : fam) sets.push_back(s.bits());
    return nu_rec(sets, 0, 0, 0, cap);
}

inline bool is_upset(const matchfree::SetFamily& fam) {
    const int n = fam.ground();
    for (auto s : fam)
        for (int e = 1; e <= n; ++e)
            if (!fam.contains(s.with(e))) return false;
    return true;
}

// |{A subset of [n] : A contains some member}|
inline std::size_t closure_size(const matchfree::SetFamily& fam) {
    const int n = fam.ground();
    std::size_t count = 0;
    for (std::uint32_t a = 0; a < (1u << n); ++a)
        for (auto s : fam)
            if ((s.bits() & ~a) == 0) {
                ++count;
                break;
            }
    return count;
}

}  // namespace oracle
