#include "matchfree/averaging.hpp"

#include "matchfree/errors.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

namespace matchfree {

AveragingReport averaging_identity(const SetFamily& fam, int s, int m, Variant variant, int threads) {
    const WeightScheme scheme = WeightScheme::make(s, m, variant);
    const int n = scheme.n;
    if (n > 8) throw InvalidParams("averaging over all permutations needs n <= 8, got n=" + std::to_string(n));
    if (fam.ground() != n) throw InvalidParams("family ground set does not match n=" + std::to_string(n));

    const std::vector<int> layers = scheme.weighted_layers();
    // sums[first - 1][j]: weight on layer j over orders starting with `first`
    std::vector<std::vector<Rational>> sums(static_cast<std::size_t>(n),
                                            std::vector<Rational>(static_cast<std::size_t>(n + 1), Rational(0)));
    std::vector<long long> counts(static_cast<std::size_t>(n), 0);
    auto sweep = [&](int first) {
        std::vector<int> order{first};
        for (int e = 1; e <= n; ++e)
            if (e != first) order.push_back(e);
        auto& mine = sums[static_cast<std::size_t>(first - 1)];
        do {
            const WeightedConfig config = build_config(s, m, CyclicOrder::from_sequence(order), variant);
            for (const auto& [set, entry] : config.entries())
                if (fam.contains(set)) mine[static_cast<std::size_t>(set.size())] += entry.weight;
            ++counts[static_cast<std::size_t>(first - 1)];
        } while (std::next_permutation(order.begin() + 1, order.end()));
    };
    const int workers = std::clamp(threads, 1, n);
    if (workers == 1) {
        for (int first = 1; first <= n; ++first) sweep(first);
    } else {
        std::atomic<int> next{1};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int first = next++; first <= n; first = next++) sweep(first);
            });
        for (std::thread& th : pool) th.join();
    }
    std::vector<Rational> total(static_cast<std::size_t>(n + 1), Rational(0));
    for (const auto& part : sums)
        for (int j = 0; j <= n; ++j) total[static_cast<std::size_t>(j)] += part[static_cast<std::size_t>(j)];
    const long long count = std::accumulate(counts.begin(), counts.end(), 0LL);

    AveragingReport r;
    r.n = n;
    r.s = s;
    r.m = m;
    r.variant = variant;
    r.permutations = count;
    r.holds = true;
    for (int j : layers) {
        AveragingLayer row;
        row.layer = j;
        row.average = total[static_cast<std::size_t>(j)] / make_rational(static_cast<long>(count), 1);
        row.expected = Rational(static_cast<long>(s) * n * static_cast<long>(fam.layer_count(j)));
        r.holds = r.holds && row.average == row.expected;
        r.average_total += row.average;
        r.expected_total += row.expected;
        r.layers.push_back(std::move(row));
    }
    // weight never lands outside the weighted layers
    for (int j = 0; j <= n; ++j)
        if (std::find(layers.begin(), layers.end(), j) == layers.end() && sgn(total[static_cast<std::size_t>(j)]) != 0)
            r.holds = false;
    return r;
}

}  // namespace matchfree
