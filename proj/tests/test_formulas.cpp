#include "matchfree/errors.hpp"
#include "matchfree/formulas.hpp"
#include "matchfree/solver.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace matchfree;

namespace {

long long value(int n, int s) { return e_formula(n, s).value.get_si(); }

// max |F| over every F in 2^[n] with no s pairwise disjoint members (n <= 4)
long long brute_force_e(int n, int s) {
    const std::uint32_t subsets = 1u << n;
    long long best = 0;
    for (std::uint64_t pick = 0; pick < (1ull << subsets); ++pick) {
        std::vector<ElementSet> members;
        for (std::uint32_t a = 0; a < subsets; ++a)
            if ((pick >> a) & 1) members.push_back(ElementSet(a));
        if (static_cast<long long>(members.size()) <= best) continue;
        std::vector<std::uint32_t> raw;
        int empties = 0;
        for (auto m : members) {
            if (m.empty()) ++empties;
            else raw.push_back(m.bits());
        }
        if (oracle::nu_rec(raw, 0, 0, 0, s) + empties < s) best = static_cast<long long>(members.size());
    }
    return best;
}

}  // namespace

TEST_CASE("closed form values") {
    CHECK(value(4, 3) == 12);
    CHECK(value(7, 3) == 105);
    CHECK(value(6, 4) == 58);
    CHECK(value(10, 4) == 977);
    CHECK(value(6, 3) == 52);
    CHECK(value(5, 3) == 26);
    CHECK(value(8, 4) == 240);
    CHECK(value(7, 4) == 120);
    for (int n = 1; n <= 12; ++n) CHECK(value(n, 2) == (1ll << (n - 1)));
}

TEST_CASE("closed form: unsupported residues and bad input") {
    CHECK_THROWS_AS(e_formula(9, 4), UnsupportedResidue);
    CHECK_THROWS_AS(e_formula(5, 1), InvalidParams);
    CHECK_THROWS_AS(e_formula(0, 3), InvalidParams);
    CHECK_THROWS_AS(e_formula(31, 3), InvalidParams);
}

TEST_CASE("closed form: s >= 5 in the sm+s-2 class carries a note") {
    CHECK(e_formula(13, 5).note.size() > 0);
    CHECK(e_formula(13, 3).note.empty());
}

TEST_CASE("closed form agrees with exhaustive search over all families") {
    CHECK(brute_force_e(3, 2) == value(3, 2));
    CHECK(brute_force_e(4, 3) == value(4, 3));
    CHECK(brute_force_e(4, 2) == value(4, 2));
}

TEST_CASE("constructions: size and matching number") {
    for (int s = 2; s <= 5; ++s)
        for (int n = 1; n <= 14; ++n) {
            const Params p = Params::make(n, s);
            if (!p.residue) continue;
            const SetFamily f = extremal_construction(n, s);
            INFO("n=" << n << " s=" << s);
            CHECK(static_cast<long long>(f.size()) == value(n, s));
            if (n <= 8) CHECK(oracle::nu(f, s) == s - 1);
            CHECK(matching_number(f, s) == s - 1);
        }
}

TEST_CASE("constructions: small instances") {
    const SetFamily k6 = kleitman_family(6, 3);
    CHECK(k6.size() == 52);
    CHECK(k6.layer_count(2) == 10);
    CHECK(oracle::nu(k6, 3) == 2);
    CHECK(kleitman_family(5, 3).size() == 26);
    CHECK(theorem_family(7, 3).size() == 105);
    CHECK(theorem_family(7, 3).is_upset());
    CHECK(extremal_construction(6, 4).size() == 58);
    CHECK(oracle::nu(extremal_construction(6, 4), 4) == 3);
    CHECK(extremal_construction(4, 3).size() == 12);
    CHECK(kleitman_family(3, 2).size() == 4);
}

TEST_CASE("solver: exact values") {
    struct Case {
        int n, s;
        long long v;
    };
    for (Case c : {Case{4, 3, 12}, Case{5, 3, 26}, Case{6, 3, 52}, Case{7, 3, 105}, Case{6, 4, 58},
                   Case{7, 4, 120}, Case{8, 4, 240}, Case{5, 2, 16}, Case{10, 4, 977}}) {
        const SolveResult r = solve_exact(c.n, c.s);
        INFO("n=" << c.n << " s=" << c.s);
        CHECK(r.optimal);
        CHECK(r.value == c.v);
        CHECK(r.upper_bound == c.v);
        CHECK(static_cast<long long>(r.witness.size()) == c.v);
        CHECK(matching_number(r.witness, c.s) < c.s);
        CHECK(!r.witness.contains(ElementSet{}));
    }
}

TEST_CASE("solver: shifted search agrees") {
    SolveOptions o;
    o.shifted_only = true;
    CHECK(solve_exact(7, 3, o).value == 105);
    CHECK(solve_exact(6, 4, o).value == 58);
}

TEST_CASE("solver: zero budget is reported as not optimal") {
    SolveOptions o;
    o.budget = std::chrono::duration<double>(0);
    const SolveResult r = solve_exact(10, 3, o);
    CHECK(!r.optimal);
    CHECK(r.value <= r.upper_bound);
    CHECK(r.value >= value(10, 3) - 1000);
}

TEST_CASE("solver: exploratory instance without a closed form") {
    const SolveResult r = solve_exact(5, 4);
    CHECK(r.optimal);
    CHECK(matching_number(r.witness, 4) < 4);
}

TEST_CASE("verify_family") {
    const auto path = std::filesystem::temp_directory_path() / "matchfree_theorem_7_3.fam";
    write_family_file(path.string(), theorem_family(7, 3));
    const FamilyReport r = verify_family_file(path.string(), 3);
    CHECK(r.size == 105);
    CHECK(r.nu == 2);
    CHECK(r.is_upset);
    REQUIRE(r.matches_formula);
    CHECK(*r.matches_formula);
    std::filesystem::remove(path);

    CHECK(verify_family(SetFamily::star(5, 1), 2).nu == 1);

    const FamilyReport three = verify_family(SetFamily(4, {ElementSet{1}, ElementSet{2}, ElementSet{3}}), 3);
    CHECK(three.nu == 3);
    REQUIRE(three.matches_formula);
    CHECK(!*three.matches_formula);

    const FamilyReport empty = verify_family(SetFamily(4, {ElementSet{}, ElementSet{1}, ElementSet{2}}), 3);
    CHECK(empty.contains_empty);
    CHECK(empty.nu == 3);
}
