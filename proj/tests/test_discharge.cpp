#include "matchfree/discharge.hpp"
#include "matchfree/errors.hpp"
#include "matchfree/formulas.hpp"
#include "matchfree/random_family.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace matchfree;

namespace {

Rational C(int n, int k) { return Rational(static_cast<unsigned long>(oracle::binom(n, k))); }

SetFamily up(int n, std::vector<ElementSet> gens) { return upset_closure(SetFamily(n, std::move(gens))); }

// sum of w(F) over F in fam, computed from the configuration directly
Rational direct_lhs(const SetFamily& fam, const WeightedConfig& config) {
    Rational sum = 0;
    for (const auto& [set, entry] : config.entries())
        if (fam.contains(set)) sum += entry.weight;
    return sum;
}

int transfers_in(const DischargeReport& r, int stage) {
    for (const StageLog& l : r.stage_logs)
        if (l.stage == stage) return l.transfers;
    return 0;
}

void check_invariants(const DischargeReport& r, const SetFamily& fam, const WeightedConfig& config) {
    CHECK(r.ledger_total == r.conclusion_lhs);
    CHECK(r.conclusion_lhs == direct_lhs(fam, config));
    CHECK(r.conclusion_rhs == conclusion_bound(r.s, r.m));
    long long arcs = 0, weighted = 0;
    for (std::size_t j = 0; j < r.z.size(); ++j) {
        arcs += static_cast<long long>(j) * r.z[j];
        weighted += r.z[j];
    }
    CHECK(weighted == r.n);
    CHECK(arcs == r.s * r.q);
    for (const CapCheck& c : r.caps) CHECK(c.ok == (c.value <= c.cap));
    CHECK(r.verdict == (r.violations.empty() && r.conclusion_lhs <= r.conclusion_rhs));
}

DischargeReport run(const SetFamily& fam, int s, int m, Variant v = Variant::Full) {
    const WeightedConfig config = build_config(s, m, CyclicOrder::identity(fam.ground()), v);
    DischargeReport r = run_discharge(fam, config);
    check_invariants(r, fam, config);
    return r;
}

}  // namespace

TEST_CASE("large sets only: nothing moves") {
    for (auto [s, m] : {std::pair{3, 3}, std::pair{4, 3}}) {
        const int n = s * m + s - 2;
        const DischargeReport r = run(SetFamily::layers_from(n, m + 1), s, m);
        CHECK(r.q == 0);
        CHECK(r.transfers.empty());
        CHECK(r.verdict);
        if (s == 3) {
            Rational lhs = 0;
            for (int k = m + 1; k <= m + 3; ++k) lhs += Rational(3 * n) * C(n, k);
            CHECK(r.conclusion_lhs == lhs);
        }
    }
}

TEST_CASE("theorem family meets the m-layer cap with equality") {
    for (auto [s, m] : {std::pair{3, 3}, std::pair{3, 2}, std::pair{4, 3}}) {
        const int n = s * m + s - 2;
        const DischargeReport r = run(theorem_family(n, s), s, m);
        CHECK(r.verdict);
        CHECK(r.q == m);
        CHECK(r.m_layer_charge == Rational(s * m) * C(n, m));
        CHECK(r.m_layer_charge == r.m_layer_cap);
    }
}

TEST_CASE("central-only variant") {
    CHECK(run(theorem_family(7, 3), 3, 2, Variant::CentralOnly).verdict);
    CHECK_THROWS_AS(run(SetFamily::star(7, 1), 3, 2, Variant::CentralOnly), StagePreconditionFailed);
}

TEST_CASE("every stage fires on some hand-built family") {
    const DischargeReport star13 = run(SetFamily::star(13, 1), 3, 4);
    CHECK(star13.verdict);
    CHECK(transfers_in(star13, 1) > 0);

    const DischargeReport pair10 = run(up(10, {ElementSet{2, 3}, ElementSet{5, 6}}), 3, 3);
    CHECK(pair10.verdict);
    for (int stage : {2, 3, 4, 5}) CHECK(transfers_in(pair10, stage) > 0);

    const DischargeReport triple14 = run(up(14, {ElementSet{2, 3}, ElementSet{5, 6}, ElementSet{8, 9}}), 4, 3);
    CHECK(triple14.verdict);
    for (int stage : {1, 2, 3, 4}) CHECK(transfers_in(triple14, stage) > 0);
}

TEST_CASE("one (m-1)-arc: only Stage 4, bounded by the lateral weight per anchor") {
    const int n = 10, m = 3;
    const Rational lateral = WeightScheme::make(3, m).lateral_m1;
    CHECK(lateral == make_rational(55, 2));
    auto per_anchor = [&](const std::vector<ElementSet>& gens) {
        const auto fam = complete_with_large_sets(n, 3, m, gens);
        REQUIRE(fam);
        const DischargeReport r = run(*fam, 3, m);
        CHECK(r.verdict);
        std::map<std::pair<int, ElementSet>, Rational> out;
        for (const Transfer& t : r.transfers) {
            CHECK(t.stage == 4);
            out[{t.x, t.to}] += t.amount;
        }
        return out;
    };
    // the arc alone carries only its own k = m-1 portion
    const auto alone = per_anchor({ElementSet{2, 3}});
    CHECK(!alone.empty());
    for (const auto& [key, amount] : alone) CHECK(amount == C(n, m - 1) / 2);
    // with its (m-2)-subarc present the bound is met with equality
    const auto with_sub = per_anchor({ElementSet{3}});
    Rational best = 0;
    for (const auto& [key, amount] : with_sub) {
        CHECK(amount <= lateral);
        if (amount > best) best = amount;
    }
    CHECK(best == lateral);
}

TEST_CASE("two m-arcs forming a 2m interval") {
    const int n = 10, m = 3;
    const auto fam = complete_with_large_sets(n, 3, m, {ElementSet{1, 2, 3}, ElementSet{4, 5, 6}});
    REQUIRE(fam);
    const DischargeReport r = run(*fam, 3, m);
    CHECK(r.verdict);
    CHECK(r.q <= m);
    CHECK(transfers_in(r, 5) == 0);
}

TEST_CASE("Stage-5 special configurations") {
    const auto families = stage5_special_families();
    REQUIRE(families.size() == 4);
    const WeightScheme w = WeightScheme::make(3, 3);
    for (const NamedFamily& nf : families) {
        INFO(nf.label);
        CHECK(matching_number(nf.family, 3) < 3);
        const DischargeReport r = run(nf.family, 3, 3);
        CHECK(r.verdict);
        CHECK(r.q == 4);
        CHECK(r.z[2] == 2);
        CHECK(r.special_case == nf.special_case);
        CHECK(!r.type_1a_fallback);
        // the 1a receiver stays within its accumulated weight
        if (r.special_case == "shared-1a") {
            const Rational cap = 2 * (w.alpha + w.alpha_prime) * C(10, 4);
            CHECK(make_rational(12, 7) * C(10, 4) <= cap);
        }
    }
}

TEST_CASE("s=4 Stage 4(ii) with two pairs meets its cap with equality") {
    const SetFamily fam = up(14, {ElementSet{1, 2, 3}, ElementSet{3, 4, 5}, ElementSet{5, 6, 7}, ElementSet{7, 8, 9}});
    const DischargeReport r = run(fam, 4, 3);
    CHECK(r.verdict);
    CHECK(r.q == 4);
    CHECK(r.z[2] == 2);
    CHECK(r.z[3] == 0);
    const WeightScheme w = WeightScheme::make(4, 3);
    Rational moved = 0;
    for (const Transfer& t : r.transfers) {
        CHECK(t.stage == 5);
        CHECK(t.amount == C(14, 3));
        moved += t.amount;
    }
    CHECK(moved == 4 * C(14, 3));
    CHECK(C(14, 3) == w.central_m1 - w.lateral_m1);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(run_discharge(SetFamily(10, {ElementSet{1, 2, 3}}), CyclicOrder::identity(10), 3, 3), NotUpSet);
    CHECK_THROWS_AS(run_discharge(SetFamily::layers_from(10, 3), CyclicOrder::identity(10), 3, 3), MatchingTooLarge);
    CHECK_THROWS_AS(run_discharge(SetFamily::all_sets(10), CyclicOrder::identity(10), 3, 3), MatchingTooLarge);
    CHECK_THROWS_AS(run_discharge(SetFamily::star(9, 1), CyclicOrder::identity(10), 3, 3), InvalidParams);
}

TEST_CASE("property: random up-sets pass, conserve charge, and respect caps") {
    std::mt19937_64 rng(20240601);
    struct Case {
        int s, m, count;
    };
    for (Case c : {Case{3, 3, 300}, Case{3, 4, 40}, Case{4, 3, 40}}) {
        const int n = c.s * c.m + c.s - 2;
        for (int it = 0; it < c.count; ++it) {
            RandomUpsetOptions o;
            o.m = c.m;
            o.no_small = it % 2 == 1;
            const SetFamily fam = random_upset(n, c.s, rng, o);
            std::vector<int> order(static_cast<std::size_t>(n));
            for (int e = 0; e < n; ++e) order[static_cast<std::size_t>(e)] = e + 1;
            if (it % 4 >= 2) std::shuffle(order.begin(), order.end(), rng);
            const WeightedConfig config = build_config(c.s, c.m, CyclicOrder::from_sequence(order));
            INFO("s=" << c.s << " m=" << c.m << " it=" << it);
            const DischargeReport r = run_discharge(fam, config);
            check_invariants(r, fam, config);
            CHECK(r.verdict);
            CHECK(r.violations.empty());
        }
    }
}

TEST_CASE("m = 2 needs the central-only weights") {
    std::mt19937_64 rng(20240601);
    int full_failures = 0;
    for (int s : {3, 4}) {
        const int m = 2, n = s * m + s - 2;
        for (int it = 0; it < 100; ++it) {
            RandomUpsetOptions o;
            o.m = m;
            o.no_small = true;
            const SetFamily fam = random_upset(n, s, rng, o);
            const DischargeReport r = run(fam, s, m, Variant::CentralOnly);
            INFO("s=" << s << " it=" << it);
            CHECK(r.verdict);
            if (!run(fam, s, m).verdict) ++full_failures;
        }
    }
    // the full weights are not claimed below m = 3, and they do break here
    CHECK(full_failures > 0);
}
