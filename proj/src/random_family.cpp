#include "matchfree/random_family.hpp"

#include <algorithm>

namespace matchfree {

namespace {

ElementSet random_arc(int n, int len, std::mt19937_64& rng) {
    const int start = std::uniform_int_distribution<int>(1, n)(rng);
    ElementSet out;
    for (int t = 0; t < len; ++t) out = out.with((start - 1 + t) % n + 1);
    return out;
}

ElementSet random_subset(int n, int size, std::mt19937_64& rng) {
    std::vector<int> elems(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) elems[static_cast<std::size_t>(e)] = e + 1;
    std::shuffle(elems.begin(), elems.end(), rng);
    ElementSet out;
    for (int t = 0; t < size; ++t) out = out.with(elems[static_cast<std::size_t>(t)]);
    return out;
}

}  // namespace

SetFamily random_upset(int n, int s, std::mt19937_64& rng, const RandomUpsetOptions& options) {
    std::vector<ElementSet> gens;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int m = std::max(1, options.m);
    for (int a = 0; a < options.attempts; ++a) {
        ElementSet cand;
        if (coin(rng) < options.arc_bias) {
            const int len = std::uniform_int_distribution<int>(options.no_small ? m : std::max(1, m - 2), m + 1)(rng);
            cand = random_arc(n, std::min(len, n), rng);
        } else {
            const int size = std::uniform_int_distribution<int>(options.no_small ? m + 1 : std::max(1, m - 1), m + 3)(rng);
            cand = random_subset(n, std::min(size, n), rng);
        }
        if (std::any_of(gens.begin(), gens.end(), [&](ElementSet g) { return g.subset_of(cand); })) continue;
        // A disjoint s-tuple through up(cand) shrinks to cand plus s-1 generators avoiding it.
        if (packing_number(gens, cand, s - 1) >= s - 1) continue;
        gens.erase(std::remove_if(gens.begin(), gens.end(), [&](ElementSet g) { return cand.subset_of(g); }),
                   gens.end());
        gens.push_back(cand);
    }
    return upset_closure(SetFamily(n, std::move(gens)));
}

SetFamily random_family(int n, std::mt19937_64& rng, double density) {
    std::bernoulli_distribution pick(density);
    std::vector<ElementSet> members;
    const ElementSet::Mask total = ElementSet::Mask{1} << n;
    for (ElementSet::Mask mask = 1; mask < total; ++mask)
        if (pick(rng)) members.emplace_back(mask);
    return SetFamily(n, std::move(members));
}

}  // namespace matchfree

namespace matchfree {

std::optional<SetFamily> complete_with_large_sets(int n, int s, int m, const std::vector<ElementSet>& generators) {
    const SetFamily generated = upset_closure(SetFamily(n, generators));
    std::vector<ElementSet> members(generated.begin(), generated.end());
    for (ElementSet big : SetFamily::layers_from(n, m + 1)) members.push_back(big);
    SetFamily fam(n, std::move(members));
    for (;;) {
        const auto tuples = enumerate_disjoint_tuples(fam, s, 1);
        if (tuples.empty()) return fam;
        std::optional<ElementSet> victim;
        for (ElementSet t : tuples.front())
            if (!generated.contains(t) && (!victim || t.size() > victim->size())) victim = t;
        if (!victim) return std::nullopt;
        std::vector<ElementSet> drop;
        for (ElementSet t : fam)
            if (t.subset_of(*victim)) drop.push_back(t);
        fam = fam.without(drop);
    }
}

std::vector<NamedFamily> stage5_special_families() {
    const std::vector<ElementSet> shared{{1, 2, 3}, {2, 3, 4}, {3, 4, 5}, {4, 5, 6}};
    const std::vector<ElementSet> split{{1, 2, 3}, {2, 3, 4}, {3, 4, 5}, {7, 8, 9}};
    std::vector<NamedFamily> out;
    auto add = [&](std::string label, std::string kind, std::vector<ElementSet> gens) {
        out.push_back({std::move(label), std::move(kind), *complete_with_large_sets(10, 3, 3, gens)});
    };
    add("interval of two m-arcs, no (m-1)-set", "shared-1a", shared);
    add("interval of two m-arcs, with (m-1)-arc {2,3}", "shared-1a", [&] {
        auto g = shared;
        g.push_back({2, 3});
        return g;
    }());
    add("two separated pairs, no (m-1)-set", "two-1b", split);
    add("two separated pairs, with (m-1)-arc {2,3}", "two-1b", [&] {
        auto g = split;
        g.push_back({2, 3});
        return g;
    }());
    return out;
}

}  // namespace matchfree
