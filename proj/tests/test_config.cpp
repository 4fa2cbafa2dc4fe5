#include "matchfree/config.hpp"
#include "matchfree/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

using namespace matchfree;

namespace {

Rational C(int n, int k) { return Rational(static_cast<unsigned long>(oracle::binom(n, k))); }

CyclicOrder random_order(int n, std::mt19937_64& rng) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(v.begin(), v.end(), rng);
    return CyclicOrder::from_sequence(v);
}

bool is_arc(ElementSet set, const CyclicOrder& sigma) {
    const int n = sigma.n(), k = set.size();
    for (int start = 1; start <= n; ++start) {
        ElementSet arc;
        for (int t = 0; t < k; ++t) arc = arc.with(sigma.element(start + t));
        if (arc == set) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("cyclic order") {
    const CyclicOrder id = CyclicOrder::identity(7);
    CHECK(id.element(7) == 7);
    CHECK(id.element(0) == 7);
    CHECK(id.element(8) == 1);
    CHECK(id.is_identity());
    const CyclicOrder o = CyclicOrder::from_sequence({3, 1, 2});
    CHECK(o.element(1) == 3);
    CHECK(o.position(3) == 1);
    CHECK_THROWS_AS(CyclicOrder::from_sequence({1, 1, 2}), InvalidParams);

    const auto path = std::filesystem::temp_directory_path() / "matchfree_sigma.txt";
    std::ofstream(path) << "2,3,1,4\n";
    CHECK(read_cyclic_order_file(path.string(), 4).element(1) == 2);
    CHECK_THROWS(read_cyclic_order_file(path.string(), 5));
    std::filesystem::remove(path);
}

TEST_CASE("geometry: s=3, m=2, anchor 7") {
    XFamilyGeometry g(3, 2, CyclicOrder::identity(7));
    CHECK(g.mset(7, 0) == ElementSet{1, 2});
    CHECK(g.mset(7, 1) == ElementSet{3, 4});
    CHECK(g.mset(7, 2) == ElementSet{5, 6});
    CHECK(g.central_m1(7, 0) == ElementSet{1, 2, 7});
    const ElementSet lat = g.lateral_m1(7, 0, 1);
    CHECK(lat == ElementSet{1, 2, 3});
    CHECK(lat.disjoint(g.chain(7, 1, 1)));
    CHECK(g.chain(7, 1, 1) == ElementSet{4});
    CHECK(lat.disjoint(g.mset(7, 2)));
    // two m-sets and a central (m+1)-set
    CHECK(g.mset(7, 0).disjoint(g.mset(7, 1)));
    CHECK(g.central_m1(7, 2) == ElementSet{5, 6, 7});
    CHECK(g.central_m1(7, 2).disjoint(g.mset(7, 0) | g.mset(7, 1)));
    CHECK(g.chain(7, 0, 0).empty());
    CHECK_THROWS_AS(build_xfamily(g, 8, WeightScheme::make(3, 2)), InvalidAnchor);
}

TEST_CASE("geometry: s=4, m=1, anchor 6") {
    XFamilyGeometry g(4, 1, CyclicOrder::identity(6));
    CHECK(g.mset(6, 0) == ElementSet{1});
    CHECK(g.mset(6, 1) == ElementSet{2});
    CHECK(g.mset(6, 2) == ElementSet{3});
    CHECK(g.mset(6, 3) == ElementSet{4});
    CHECK(g.central_m2_4(6, 0) == ElementSet{1, 5, 6});
    CHECK(g.central_m1_4(6, 0, false) == ElementSet{1, 6});
    CHECK(g.central_m1_4(6, 0, true) == ElementSet{1, 5});
}

TEST_CASE("weight scheme: s=3 constants") {
    const WeightScheme w = WeightScheme::make(3, 3);
    CHECK(w.alpha == make_rational(11, 84));
    CHECK(w.alpha_prime == make_rational(31, 42));
    CHECK(w.alpha_prime > w.alpha);
    for (int m = 1; m <= 9; ++m) {
        const WeightScheme v = WeightScheme::make(3, m);
        CHECK(v.alpha_prime + 2 * v.alpha == 1);
        CHECK(v.central_m1 == v.alpha_prime * C(v.n, m + 1));
        CHECK(v.lateral_m1 == v.alpha * C(v.n, m + 1));
    }
}

TEST_CASE("weight scheme: s=4 per-group identities") {
    for (int m = 1; m <= 7; ++m) {
        const WeightScheme w = WeightScheme::make(4, m);
        CHECK(2 * w.central_m1 + 3 * w.lateral_m1 == C(w.n, m + 1));
        CHECK(w.central_m2 + 6 * w.lateral_m2 == C(w.n, m + 2));
        CHECK(5 * w.lateral_m1 == make_rational(m, 3 * m + 2) * C(w.n, m + 1));
    }
}

TEST_CASE("layer sums at n=7") {
    const LayerSumReport r = verify_layer_sums(build_config(3, 2, CyclicOrder::identity(7)));
    CHECK(r.ok());
    for (const LayerSumRow& row : r.rows) {
        if (row.layer == 3) CHECK(row.sum == 735);
        if (row.layer == 1) CHECK(row.sum == 147);
    }
}

TEST_CASE("layer sums and group sums over random orders") {
    std::mt19937_64 rng(5);
    for (int s : {3, 4})
        for (int m = 1; m <= (s == 3 ? 5 : 3); ++m) {
            const int n = s * m + s - 2;
            for (int rep = 0; rep < 3; ++rep) {
                const CyclicOrder sigma = rep == 0 ? CyclicOrder::identity(n) : random_order(n, rng);
                const WeightedConfig config = build_config(s, m, sigma);
                INFO("s=" << s << " m=" << m << " rep=" << rep);
                const LayerSumReport r = verify_layer_sums(config);
                CHECK(r.ok());
                const auto layers = config.scheme().weighted_layers();
                for (const LayerSumRow& row : r.rows) {
                    const bool weighted = std::find(layers.begin(), layers.end(), row.layer) != layers.end();
                    CHECK(row.sum == (weighted ? Rational(s * n) * C(n, row.layer) : Rational(0)));
                }
                CHECK(verify_group_sums(config).empty());
            }
        }
}

TEST_CASE("layer sums: explicit s=4, m=3 layers") {
    const WeightedConfig config = build_config(4, 3, CyclicOrder::identity(14));
    std::map<int, Rational> sums;
    for (const auto& [set, entry] : config.entries()) sums[set.size()] += entry.weight;
    for (int j : {1, 2, 3, 4, 5, 8}) CHECK(sums[j] == Rational(4 * 14) * C(14, j));
    CHECK(!sums.contains(6));
    CHECK(!sums.contains(7));
}

TEST_CASE("central-only variant is exempt on the changed layers") {
    const LayerSumReport r = verify_layer_sums(build_config(3, 3, CyclicOrder::identity(10), Variant::CentralOnly));
    CHECK(r.ok());
    bool exempt = false;
    for (const LayerSumRow& row : r.rows)
        if (row.status == LayerSumRow::Status::VariantExempt) exempt = true;
    CHECK(exempt);
}

TEST_CASE("m-sets accumulate s copies; small sets are arcs") {
    std::mt19937_64 rng(9);
    for (int s : {3, 4}) {
        const int m = 3, n = s * m + s - 2;
        const CyclicOrder sigma = random_order(n, rng);
        const WeightedConfig config = build_config(s, m, sigma);
        int msets = 0;
        for (const auto& [set, entry] : config.entries()) {
            if (set.size() <= m) CHECK(is_arc(set, sigma));
            if (set.size() == m) {
                ++msets;
                CHECK(entry.weight == Rational(s) * C(n, m));
            }
        }
        CHECK(msets == n);
    }
}

TEST_CASE("type 1a sets carry the largest (m+1) weight") {
    // at m = 1 roles coincide on the 2-sets, so the bound starts at m = 2
    for (int m = 2; m <= 6; ++m) {
        const WeightedConfig config = build_config(3, m, CyclicOrder::identity(3 * m + 1));
        const WeightScheme& w = config.scheme();
        Rational best = 0;
        for (const auto& [set, entry] : config.entries())
            if (set.size() == m + 1 && entry.weight > best) best = entry.weight;
        CHECK(best == 2 * (w.alpha + w.alpha_prime) * C(w.n, m + 1));
    }
}

TEST_CASE("weight type catalog is consistent at m=3") {
    const WeightedConfig config = build_config(3, 3, CyclicOrder::identity(10));
    const auto types = weight_type_catalog(config);
    int total = 0;
    std::map<int, Rational> per_layer;
    for (const WeightType& t : types) {
        total += t.count;
        per_layer[t.size] += t.weight * t.count;
        CHECK(t.normalized == t.weight / C(10, t.size));
        CHECK(t.pattern.size() == 10u);
    }
    CHECK(total == static_cast<int>(config.entries().size()));
    for (auto& [k, sum] : per_layer) CHECK(sum == Rational(30) * C(10, k));
    // rotation invariance under the identity order: every class has n members or divides n
    for (const WeightType& t : types) CHECK(10 % t.count == 0);
}

TEST_CASE("disjointness catalog") {
    std::mt19937_64 rng(3);
    for (auto [s, m] : {std::pair{3, 2}, std::pair{3, 3}, std::pair{3, 4}, std::pair{4, 2}, std::pair{4, 3}}) {
        const int n = s * m + s - 2;
        for (int rep = 0; rep < 2; ++rep) {
            const CatalogReport r = verify_disjointness_catalog(s, m, rep ? random_order(n, rng) : CyclicOrder::identity(n));
            INFO("s=" << s << " m=" << m);
            CHECK(r.ok());
            CHECK(r.checks > 0);
        }
    }
    XFamilyGeometry g(4, 3, CyclicOrder::identity(14));
    for (int x = 1; x <= 14; ++x)
        for (int j = 0; j < 4; ++j)
            for (int o = 0; o < 4; ++o)
                if (o != j) CHECK(g.top4(x, j).disjoint(g.chain(x, o, 2)));
}

TEST_CASE("configuration parameters are validated") {
    CHECK_THROWS_AS(build_config(3, 2, CyclicOrder::identity(8)), InvalidParams);
    CHECK_THROWS_AS(build_config(5, 2, CyclicOrder::identity(13)), InvalidParams);
}
