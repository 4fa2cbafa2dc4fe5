#include "matchfree/errors.hpp"
#include "matchfree/inequalities.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <optional>

using namespace matchfree;

namespace {

std::map<std::pair<std::string, int>, InequalityRecord> index(const std::vector<InequalityRecord>& records) {
    std::map<std::pair<std::string, int>, InequalityRecord> out;
    for (const InequalityRecord& r : records) out[{r.id, r.m}] = r;
    return out;
}

}  // namespace

TEST_CASE("s=3 hand-evaluated bounds") {
    const auto r = index(audit(3, 6));
    // 1 - (39+70+36)/(40+80+30)
    CHECK(r.at({"eq78-fraction", 1}).margin == make_rational(1, 30));
    CHECK(r.at({"eq78", 1}).holds);
    for (int m = 1; m <= 6; ++m) {
        CHECK(r.at({"eq77", m}).margin == 0);
        CHECK(r.at({"eq77", m}).holds);
    }
    CHECK(r.at({"stage1-s3", 3}).vacuous);
    CHECK(r.at({"stage1-s3", 2}).vacuous);
    CHECK(!r.at({"stage1-s3", 4}).vacuous);
    CHECK(r.at({"stage1-s3", 4}).holds);
}

TEST_CASE("s=4 hand-evaluated bounds") {
    const auto r = index(audit(4, 6));
    // 8/11 - 4(m+1)(m+2)/((3m+2)(3m+1)) at m = 2
    const InequalityRecord& e = r.at({"eq0667", 2});
    CHECK(e.margin == make_rational(-10, 77));
    CHECK(!e.holds);
    CHECK(e.expected_fail);
    CHECK(!e.in_range);
    for (int m = 3; m <= 6; ++m) CHECK(r.at({"eq0667", m}).holds);
    for (int m = 1; m <= 6; ++m) {
        CHECK(r.at({"eq0666", m}).margin == 0);
        CHECK(r.at({"eq0666", m}).holds);
    }
}

TEST_CASE("every in-range bound holds up to m = 200") {
    for (int s : {3, 4})
        for (const InequalityRecord& rec : audit(s, 200)) {
            INFO(rec.id << " s=" << rec.s << " m=" << rec.m << " k=" << rec.k);
            if (rec.in_range) CHECK(rec.holds);
            if (rec.expected_fail) CHECK(!rec.in_range);
            if (rec.equality && rec.in_range) CHECK(rec.margin == 0);
        }
}

TEST_CASE("expanded eq005 records agree with the collapsed form") {
    const auto collapsed = audit(3, 20);
    AuditOptions o;
    o.expand_k = true;
    const auto expanded = audit(3, 20, o);
    CHECK(expanded.size() > collapsed.size());
    // the collapsed record is the smallest margin among substantive k, if any
    std::map<int, std::vector<InequalityRecord>> by_m;
    for (const InequalityRecord& r : expanded)
        if (r.id == "eq005") by_m[r.m].push_back(r);
    for (const InequalityRecord& r : collapsed) {
        if (r.id != "eq005") continue;
        const auto& list = by_m.at(r.m);
        const bool any_real = std::any_of(list.begin(), list.end(), [](const auto& x) { return !x.vacuous; });
        std::optional<Rational> worst;
        bool all = true;
        for (const InequalityRecord& x : list) {
            all = all && x.holds;
            if (any_real && x.vacuous) continue;
            if (!worst || x.margin < *worst) worst = x.margin;
        }
        CHECK(r.margin == *worst);
        CHECK(r.holds == all);
    }
}

TEST_CASE("csv layout and parameter checks") {
    const std::string csv = audit_csv(audit(3, 2));
    CHECK(csv.rfind("id,s,m,k,holds,vacuous,margin\n", 0) == 0);
    CHECK(csv.find("eq77,3,2,,true,false,0/1") != std::string::npos);
    CHECK_THROWS_AS(audit(5, 3), InvalidParams);
    CHECK_THROWS_AS(audit(3, 0), InvalidParams);
}
