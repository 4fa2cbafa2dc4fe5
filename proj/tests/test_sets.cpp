#include "matchfree/errors.hpp"
#include "matchfree/family.hpp"
#include "matchfree/random_family.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace matchfree;

TEST_CASE("element set basics") {
    ElementSet a{1, 3, 5};
    CHECK(a.size() == 3);
    CHECK(a.contains(3));
    CHECK(!a.contains(2));
    CHECK(a.to_string() == "{1,3,5}");
    CHECK(a.with(2) == ElementSet{1, 2, 3, 5});
    CHECK(a.without(1) == ElementSet{3, 5});
    CHECK(ElementSet{1}.disjoint(ElementSet{2}));
    CHECK(ElementSet{1}.subset_of(a));
    CHECK(ElementSet::full(4).size() == 4);
    CHECK(!ElementSet{5}.fits(4));
}

TEST_CASE("matching number examples") {
    SetFamily singletons(4, {ElementSet{1}, ElementSet{2}, ElementSet{3}});
    CHECK(matching_number(singletons, 10) == 3);
    CHECK(matching_number(SetFamily::star(6, 1), 10) == 1);
    CHECK(matching_number(SetFamily::layers_from(5, 2), 3) == 2);
    CHECK(matching_number(SetFamily::layers_from(6, 2), 10) == 3);
    CHECK(matching_number(SetFamily(5), 3) == 0);
}

TEST_CASE("matching number rejects the empty set") {
    SetFamily with_empty(3, {ElementSet{}, ElementSet{1}});
    CHECK_THROWS_AS(matching_number(with_empty, 3), EmptySetPresent);
}

TEST_CASE("closures and minimal members") {
    SetFamily one(3, {ElementSet{1, 2}});
    CHECK(upset_closure(one) == SetFamily(3, {ElementSet{1, 2}, ElementSet{1, 2, 3}}));
    CHECK(upset_closure(SetFamily(3)).empty());
    CHECK(upset_closure(SetFamily(3, {ElementSet{1}})) ==
          SetFamily(3, {ElementSet{1}, ElementSet{1, 2}, ElementSet{1, 3}, ElementSet{1, 2, 3}}));

    SetFamily mixed(3, {ElementSet{1}, ElementSet{1, 2}, ElementSet{2, 3}});
    CHECK(minimal_members(mixed) == SetFamily(3, {ElementSet{1}, ElementSet{2, 3}}));
    CHECK(minimal_members(upset_closure(SetFamily(5, {ElementSet{2, 4}}))) == SetFamily(5, {ElementSet{2, 4}}));
    CHECK(minimal_members(SetFamily::layers_from(4, 2)).size() == 6);

    SetFamily down = downset_closure(SetFamily(3, {ElementSet{1, 2}}));
    CHECK(down.size() == 4);
    CHECK(down.contains(ElementSet{}));
}

TEST_CASE("disjoint tuples") {
    SetFamily f(4, {ElementSet{1}, ElementSet{2}, ElementSet{3, 4}});
    auto t = enumerate_disjoint_tuples(f, 3, 100);
    REQUIRE(t.size() == 1);
    CHECK(t[0].size() == 3);
    CHECK(enumerate_disjoint_tuples(SetFamily::star(5, 1), 2, 100).empty());

    std::vector<ElementSet> pairs;
    for (int a = 1; a <= 6; ++a)
        for (int b = a + 1; b <= 6; ++b) pairs.push_back(ElementSet{a, b});
    CHECK(enumerate_disjoint_tuples(SetFamily(6, pairs), 3, 1000).size() == 15);
    CHECK(enumerate_disjoint_tuples(SetFamily(6, pairs), 3, 4).size() == 4);
}

TEST_CASE("family text round trip") {
    SetFamily f(6, {ElementSet{1, 2}, ElementSet{3}, ElementSet{2, 4, 6}});
    std::stringstream ss;
    write_family(ss, f);
    CHECK(read_family(ss) == f);

    std::stringstream bad("n=3\n1,4\n");
    CHECK_THROWS_AS(read_family(bad), ParseError);
    std::stringstream no_header("1,2\n");
    CHECK_THROWS_AS(read_family(no_header), ParseError);
}

TEST_CASE("property: closure is idempotent, an up-set, and keeps the matching number") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 60; ++it) {
        const int n = 4 + it % 7;
        SetFamily f = random_family(n, rng, 0.02 + 0.01 * (it % 5));
        f = f.without(std::vector<ElementSet>{ElementSet{}});
        const SetFamily up = upset_closure(f);
        CHECK(upset_closure(up) == up);
        CHECK(up.is_upset());
        CHECK(oracle::is_upset(up));
        CHECK(up.size() == oracle::closure_size(f));
        CHECK(matching_number(up, 5) == matching_number(f, 5));
        CHECK(matching_number(f, 5) == oracle::nu(f, 5));
        CHECK(upset_closure(minimal_members(up)) == up);
    }
}

TEST_CASE("property: random up-sets are up-sets below the matching bound") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 20; ++it) {
        RandomUpsetOptions o;
        o.m = 3;
        o.no_small = it % 2 == 1;
        const SetFamily f = random_upset(10, 3, rng, o);
        CHECK(f.is_upset());
        CHECK(matching_number(f, 3) < 3);
    }
}
