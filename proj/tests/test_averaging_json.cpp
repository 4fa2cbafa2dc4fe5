#include "matchfree/averaging.hpp"
#include "matchfree/errors.hpp"
#include "matchfree/formulas.hpp"
#include "matchfree/json_io.hpp"
#include "matchfree/random_family.hpp"
#include "matchfree/solver.hpp"

#include <doctest.h>

#include <random>

using namespace matchfree;

TEST_CASE("averaging identity on fixed families") {
    const AveragingReport r = averaging_identity(theorem_family(7, 3), 3, 2);
    CHECK(r.permutations == 5040);
    CHECK(r.holds);
    CHECK(r.average_total == r.expected_total);
    for (const AveragingLayer& l : r.layers) CHECK(l.average == l.expected);

    const AveragingReport all = averaging_identity(SetFamily::all_sets(6), 4, 1);
    CHECK(all.holds);
}

TEST_CASE("averaging identity: random families, thread split does not matter") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 2; ++i) {
        const SetFamily fam = random_family(7, rng, 0.5);
        const AveragingReport one = averaging_identity(fam, 3, 2, Variant::Full, 1);
        const AveragingReport two = averaging_identity(fam, 3, 2, Variant::Full, 3);
        CHECK(one.holds);
        CHECK(one.average_total == two.average_total);
    }
}

TEST_CASE("averaging identity rejects large n") {
    CHECK_THROWS_AS(averaging_identity(SetFamily::star(10, 1), 3, 3), InvalidParams);
}

TEST_CASE("json: sets and families round trip") {
    const ElementSet a{1, 4, 9};
    CHECK(set_from_json(set_json(a)) == a);
    const SetFamily f = theorem_family(7, 3);
    CHECK(family_from_json(family_json(f)) == f);
}

TEST_CASE("json: every report validates after a text round trip") {
    std::vector<Json> docs;
    docs.push_back(to_json(e_formula(7, 3)));
    docs.push_back(to_json(verify_family(theorem_family(7, 3), 3)));
    docs.push_back(to_json(solve_exact(5, 3), true));
    const WeightedConfig config = build_config(3, 2, CyclicOrder::identity(7));
    docs.push_back(to_json(config));
    docs.push_back(to_json(verify_layer_sums(config)));
    docs.push_back(to_json(verify_disjointness_catalog(3, 2, CyclicOrder::identity(7))));
    docs.push_back(to_json(weight_type_catalog(config)));
    docs.push_back(to_json(run_discharge(theorem_family(10, 3), CyclicOrder::identity(10), 3, 3)));
    docs.push_back(to_json(audit(4, 3)));
    docs.push_back(to_json(averaging_identity(theorem_family(7, 3), 3, 2)));
    for (const Json& j : docs) {
        const Json back = Json::parse(j.dump());
        CHECK(back == j);
        CHECK(validate_report(back) == j["schema"].get<std::string>());
    }
}

TEST_CASE("json: solver witness round trip") {
    const SolveResult r = solve_exact(5, 3);
    const Json j = to_json(r, true);
    CHECK(family_from_json(j["witness"]) == r.witness);
    CHECK(!to_json(r).contains("witness"));
}

TEST_CASE("json: validation rejects tampered reports") {
    Json j = to_json(run_discharge(theorem_family(10, 3), CyclicOrder::identity(10), 3, 3));
    Json bad_schema = j;
    bad_schema["schema"] = "something/else";
    CHECK_THROWS(validate_report(bad_schema));
    Json bad_rational = j;
    bad_rational["conclusion_lhs"] = "1/0";
    CHECK_THROWS(validate_report(bad_rational));
}
