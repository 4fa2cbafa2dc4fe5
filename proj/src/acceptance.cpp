#include "matchfree/acceptance.hpp"

#include "matchfree/averaging.hpp"
#include "matchfree/config.hpp"
#include "matchfree/discharge.hpp"
#include "matchfree/errors.hpp"
#include "matchfree/formulas.hpp"
#include "matchfree/inequalities.hpp"
#include "matchfree/random_family.hpp"
#include "matchfree/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>

namespace matchfree {

namespace {

using Clock = std::chrono::steady_clock;

struct Tally {
    int checks = 0;
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 8) failures.push_back(what);
        else if (!ok) failures.back() = "... and more";
    }
    void into(CriterionResult& r) const {
        r.passed = failures.empty();
        std::ostringstream os;
        os << checks << " checks";
        for (const std::string& f : failures) os << "; " << f;
        r.detail = os.str();
    }
};

CyclicOrder random_order(int n, std::mt19937_64& rng) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    return CyclicOrder::from_sequence(order);
}

const std::vector<std::pair<std::pair<int, int>, long>> kValues = {
    {{4, 3}, 12}, {{7, 3}, 105}, {{6, 4}, 58}, {{10, 4}, 977},
    {{5, 3}, 26}, {{6, 3}, 52},  {{7, 4}, 120}, {{8, 4}, 240}};

void formula_fidelity(CriterionResult& r) {
    Tally t;
    for (const auto& [ns, want] : kValues) {
        const ExtremalValue v = e_formula(ns.first, ns.second);
        t.expect(v.value == want, "e(" + std::to_string(ns.first) + "," + std::to_string(ns.second) + ") = " +
                                      v.value.get_str() + ", expected " + std::to_string(want));
    }
    t.into(r);
}

void construction_fidelity(CriterionResult& r) {
    Tally t;
    for (const auto& [ns, want] : kValues) {
        const auto [n, s] = ns;
        if (n > 14) continue;
        const SetFamily fam = extremal_construction(n, s);
        const std::string tag = "(" + std::to_string(n) + "," + std::to_string(s) + ")";
        t.expect(static_cast<long>(fam.size()) == want, tag + " size " + std::to_string(fam.size()));
        t.expect(matching_number(fam, s) == s - 1, tag + " matching number is not s-1");
    }
    t.into(r);
}

void oracle_agreement(CriterionResult& r) {
    Tally t;
    struct Case {
        int n, s;
        long want;
        double budget;
        bool may_stop;
    };
    for (const Case c : {Case{4, 3, 12, 60, false}, Case{5, 3, 26, 60, false}, Case{6, 4, 58, 60, false},
                         Case{6, 3, 52, 300, false}, Case{7, 3, 105, 7200, true}}) {
        SolveOptions o;
        o.budget = std::chrono::duration<double>(c.budget);
        const SolveResult res = solve_exact(c.n, c.s, o);
        const std::string tag = "(" + std::to_string(c.n) + "," + std::to_string(c.s) + ")";
        const bool within = res.elapsed.count() <= c.budget;
        if (res.optimal) {
            t.expect(res.value == c.want && within, tag + " solved " + std::to_string(res.value));
        } else {
            // only (7,3) may stop early, and then best >= 105 with bound <= 105
            t.expect(c.may_stop && res.value >= c.want && res.upper_bound <= c.want,
                     tag + " budget-limited: best " + std::to_string(res.value) + ", bound " +
                         std::to_string(res.upper_bound));
        }
    }
    t.into(r);
}

void layer_sums(CriterionResult& r, std::uint64_t seed) {
    Tally t;
    std::mt19937_64 rng(seed);
    for (int s : {3, 4})
        for (int m = 1; m <= (s == 3 ? 6 : 5); ++m) {
            const int n = s * m + s - 2;
            for (int p = 0; p <= 20; ++p) {
                const CyclicOrder sigma = p == 0 ? CyclicOrder::identity(n) : random_order(n, rng);
                const LayerSumReport rep = verify_layer_sums(build_config(s, m, sigma));
                t.expect(rep.ok(), "s=" + std::to_string(s) + " m=" + std::to_string(m) + " permutation " +
                                       std::to_string(p));
            }
        }
    t.into(r);
}

void catalog(CriterionResult& r, std::uint64_t seed) {
    Tally t;
    std::mt19937_64 rng(seed);
    long long checks = 0;
    for (int s : {3, 4})
        for (int m = 3; m <= (s == 3 ? 6 : 5); ++m) {
            const int n = s * m + s - 2;
            for (int p = 0; p < 3; ++p) {
                const CyclicOrder sigma = p == 0 ? CyclicOrder::identity(n) : random_order(n, rng);
                const CatalogReport rep = verify_disjointness_catalog(s, m, sigma);
                checks += rep.checks;
                t.expect(rep.ok(), "s=" + std::to_string(s) + " m=" + std::to_string(m) + ": " +
                                       std::to_string(rep.violations.size()) + " violations");
            }
        }
    t.into(r);
    r.detail += " (" + std::to_string(checks) + " disjointness relations)";
}

void discharging(CriterionResult& r, std::uint64_t seed) {
    Tally t;
    // (a) theorem families
    for (auto [n, s] : {std::pair{7, 3}, std::pair{10, 3}, std::pair{13, 3}, std::pair{10, 4}, std::pair{14, 4}}) {
        const int m = (n - s + 2) / s;
        const Variant v = m == 2 ? Variant::CentralOnly : Variant::Full;
        const std::string tag = "theorem (" + std::to_string(n) + "," + std::to_string(s) + ")";
        try {
            const DischargeReport rep = run_discharge(theorem_family(n, s), CyclicOrder::identity(n), s, m, v);
            t.expect(rep.verdict && rep.violations.empty(), tag + " verdict false");
            t.expect(rep.m_layer_charge == rep.m_layer_cap, tag + " m-layer cap not met with equality");
        } catch (const Error& e) {
            t.expect(false, tag + ": " + e.what());
        }
    }
    // (b) random up-sets, half with identity order and half with a random one
    std::mt19937_64 rng(seed);
    for (auto [n, s, m] : {std::tuple{10, 3, 3}, std::tuple{14, 4, 3}}) {
        int bad = 0;
        for (int it = 0; it < 1000; ++it) {
            RandomUpsetOptions o;
            o.m = m;
            o.no_small = it % 2 == 1;
            const SetFamily fam = random_upset(n, s, rng, o);
            const CyclicOrder sigma = it % 4 < 2 ? CyclicOrder::identity(n) : random_order(n, rng);
            try {
                const DischargeReport rep = run_discharge(fam, sigma, s, m);
                if (!rep.verdict) ++bad;
            } catch (const Error& e) {
                ++bad;
                t.expect(false, "random (" + std::to_string(n) + "," + std::to_string(s) + ") #" + std::to_string(it) +
                                    ": " + e.what());
            }
        }
        t.expect(bad == 0, std::to_string(bad) + " random failures at n=" + std::to_string(n));
    }
    // (c) Stage-5 special case
    for (const NamedFamily& f : stage5_special_families()) {
        try {
            const DischargeReport rep = run_discharge(f.family, CyclicOrder::identity(10), 3, 3);
            t.expect(rep.verdict && rep.special_case == f.special_case, f.label + ": verdict " +
                                                                            std::to_string(rep.verdict) + ", case " +
                                                                            rep.special_case);
        } catch (const Error& e) {
            t.expect(false, f.label + ": " + e.what());
        }
    }
    t.into(r);
}

void averaging(CriterionResult& r, std::uint64_t seed) {
    Tally t;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 5; ++i) {
        const SetFamily fam = random_family(7, rng, 0.5);
        const AveragingReport rep = averaging_identity(fam, 3, 2);
        t.expect(rep.holds && rep.permutations == 5040, "family " + std::to_string(i) + ": average " +
                                                             to_string(rep.average_total) + " vs " +
                                                             to_string(rep.expected_total));
    }
    t.into(r);
}

void inequality_audit(CriterionResult& r) {
    Tally t;
    for (int s : {3, 4}) {
        for (const InequalityRecord& rec : audit(s, 1000)) {
            const std::string tag = rec.id + " s=" + std::to_string(s) + " m=" + std::to_string(rec.m);
            if (rec.in_range) t.expect(rec.holds, tag + " fails in range");
            if (rec.id == "eq77" || rec.id == "eq0666") t.expect(sgn(rec.margin) == 0, tag + " margin not 0");
            if (rec.id == "eq0667" && rec.m == 2) t.expect(rec.expected_fail, tag + " not an expected fail");
            if (rec.id == "stage1-s3" && rec.m <= 3) t.expect(rec.vacuous, tag + " not vacuous");
            if (rec.id == "stage1-s3" && rec.m >= 3) t.expect(rec.holds, tag + " fails");
        }
    }
    t.into(r);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    struct Entry {
        int id;
        const char* title;
        double limit;
        std::function<void(CriterionResult&)> body;
    };
    const std::uint64_t seed = options.seed;
    const std::vector<Entry> all = {
        {1, "formula fidelity", 1, formula_fidelity},
        {2, "construction fidelity", 10, construction_fidelity},
        {3, "oracle agreement", 7200 + 420, oracle_agreement},
        {4, "layer-sum identity", 120, [&](CriterionResult& r) { layer_sums(r, seed); }},
        {5, "disjointness catalog", 120, [&](CriterionResult& r) { catalog(r, seed); }},
        {6, "discharging soundness", 1800, [&](CriterionResult& r) { discharging(r, seed); }},
        {7, "averaging identity", 600, [&](CriterionResult& r) { averaging(r, seed); }},
        {8, "inequality audit", 300, inequality_audit},
    };
    std::vector<CriterionResult> out;
    for (const Entry& e : all) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), e.id) == options.only.end())
            continue;
        CriterionResult r;
        r.id = e.id;
        r.title = e.title;
        r.limit_seconds = e.limit;
        const auto start = Clock::now();
        try {
            e.body(r);
        } catch (const std::exception& ex) {
            r.passed = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (r.seconds > r.limit_seconds) {
            r.passed = false;
            r.detail += "; time limit exceeded";
        }
        if (options.on_result) options.on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << ": " << r.detail << " (" << r.seconds
       << " s, limit " << r.limit_seconds << " s)";
    return os.str();
}

}  // namespace matchfree
