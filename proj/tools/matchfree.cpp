// Command-line front end. Exit codes: 0 ok, 1 usage or input error,
// 2 budget-limited search, 3 verification failure.

#include "matchfree/acceptance.hpp"
#include "matchfree/averaging.hpp"
#include "matchfree/config.hpp"
#include "matchfree/discharge.hpp"
#include "matchfree/errors.hpp"
#include "matchfree/formulas.hpp"
#include "matchfree/inequalities.hpp"
#include "matchfree/json_io.hpp"
#include "matchfree/random_family.hpp"
#include "matchfree/solver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

using namespace matchfree;

namespace {

constexpr int kOk = 0, kUsage = 1, kBudget = 2, kVerify = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int env_threads() {
    const char* v = std::getenv("MATCHFREE_THREADS");
    if (!v || !*v) return 1;
    try {
        return std::max(1, std::stoi(v));
    } catch (const std::exception&) {
        throw UsageError("MATCHFREE_THREADS must be a positive integer, got '" + std::string(v) + "'");
    }
}

void emit(const Json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

Variant parse_variant(const std::string& v) {
    if (v == "full") return Variant::Full;
    if (v == "central-only") return Variant::CentralOnly;
    throw UsageError("--variant must be full or central-only, got '" + v + "'");
}

CyclicOrder load_sigma(const std::string& spec, int n) {
    if (spec.empty() || spec == "identity") return CyclicOrder::identity(n);
    return read_cyclic_order_file(spec, n);
}

struct Args {
    int n = 0, s = 0, m = 0, m_max = 1000, random = 0;
    double budget = 60;
    bool shifted = false, json = false, types = false;
    std::uint64_t seed = 20240601;
    std::string family, out, report, sigma = "identity", variant = "full", witness, only;
};

int cmd_formula(const Args& a) {
    const ExtremalValue v = e_formula(a.n, a.s);
    if (a.json) emit(to_json(v), a.out);
    else std::cout << v.value.get_str() << '\n';
    if (!v.note.empty()) std::cerr << "note: " << v.note << '\n';
    return kOk;
}

int cmd_construct(const Args& a) {
    const SetFamily fam = extremal_construction(a.n, a.s);
    if (a.out.empty()) write_family(std::cout, fam);
    else write_family_file(a.out, fam);
    std::cerr << "size " << fam.size() << '\n';
    return kOk;
}

int cmd_check(const Args& a) {
    if (!a.report.empty()) {
        std::ifstream in(a.report);
        if (!in) throw UsageError("--report: cannot open '" + a.report + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw UsageError(std::string("--report: ") + e.what());
        }
        std::cout << "valid " << validate_report(j) << '\n';
        return kOk;
    }
    if (a.family.empty() || a.s == 0) throw UsageError("check needs --family and --s (or --report)");
    const FamilyReport r = verify_family_file(a.family, a.s);
    if (a.json) {
        emit(to_json(r), a.out);
    } else {
        std::cout << "size " << r.size << "\nnu " << r.nu << "\nis_upset " << (r.is_upset ? "true" : "false") << '\n';
        if (r.matches_formula) std::cout << "matches_formula " << (*r.matches_formula ? "true" : "false") << '\n';
    }
    return r.nu < a.s ? kOk : kVerify;
}

int cmd_solve(const Args& a) {
    SolveOptions o;
    o.budget = std::chrono::duration<double>(a.budget);
    o.shifted_only = a.shifted;
    const SolveResult r = solve_exact(a.n, a.s, o);
    if (!a.witness.empty()) write_family_file(a.witness, r.witness);
    if (a.json) emit(to_json(r), a.out);
    else
        std::cout << "value " << r.value << "\noptimal " << (r.optimal ? "true" : "false") << "\nupper_bound "
                  << r.upper_bound << "\nnodes " << r.nodes_explored << "\nseconds " << r.elapsed.count() << '\n';
    return r.optimal ? kOk : kBudget;
}

int cmd_config(const Args& a) {
    const int n = a.s * a.m + a.s - 2;
    const WeightedConfig config = build_config(a.s, a.m, load_sigma(a.sigma, n), parse_variant(a.variant));
    const LayerSumReport layers = verify_layer_sums(config);
    if (!a.out.empty()) emit(to_json(config), a.out);
    if (a.types) {
        emit(to_json(weight_type_catalog(config)), "");
    } else {
        std::cout << "sets " << config.entries().size() << '\n';
        for (const LayerSumRow& row : layers.rows)
            std::cout << "layer " << row.layer << " sum " << to_string(row.sum) << " expected "
                      << to_string(row.expected)
                      << (row.status == LayerSumRow::Status::Mismatch        ? " MISMATCH"
                          : row.status == LayerSumRow::Status::VariantExempt ? " variant-exempt"
                                                                              : " ok")
                      << '\n';
    }
    return layers.ok() ? kOk : kVerify;
}

int cmd_audit_config(const Args& a) {
    const int n = a.s * a.m + a.s - 2;
    std::mt19937_64 rng(a.seed);
    std::vector<CyclicOrder> orders{load_sigma(a.sigma, n)};
    for (int i = 0; i < a.random; ++i) {
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int e = 0; e < n; ++e) order[static_cast<std::size_t>(e)] = e + 1;
        std::shuffle(order.begin(), order.end(), rng);
        orders.push_back(CyclicOrder::from_sequence(order));
    }
    bool ok = true;
    Json runs = Json::array();
    for (const CyclicOrder& sigma : orders) {
        const WeightedConfig config = build_config(a.s, a.m, sigma, parse_variant(a.variant));
        const LayerSumReport layers = verify_layer_sums(config);
        const std::vector<std::string> groups = verify_group_sums(config);
        const CatalogReport catalog = verify_disjointness_catalog(a.s, a.m, sigma);
        ok = ok && layers.ok() && groups.empty() && catalog.ok();
        runs.push_back({{"layer_sums", to_json(layers)}, {"group_sum_failures", groups}, {"catalog", to_json(catalog)}});
        std::cout << "layer sums " << (layers.ok() ? "ok" : "FAIL") << ", group sums "
                  << (groups.empty() ? "ok" : "FAIL") << ", catalog " << catalog.checks << " relations, "
                  << catalog.violations.size() << " violations\n";
    }
    if (!a.out.empty()) {
        Json j;
        j["schema"] = "matchfree/audit-config/1";
        j["s"] = a.s;
        j["m"] = a.m;
        j["seed"] = a.seed;
        j["runs"] = std::move(runs);
        emit(j, a.out);
    }
    return ok ? kOk : kVerify;
}

int cmd_discharge(const Args& a) {
    if (a.family.empty()) throw UsageError("discharge needs --family");
    const SetFamily fam = read_family_file(a.family);
    const int n = a.s * a.m + a.s - 2;
    if (fam.ground() != n)
        throw UsageError("--family has n=" + std::to_string(fam.ground()) + ", but --s/--m give n=" + std::to_string(n));
    DischargeReport r;
    try {
        r = run_discharge(fam, load_sigma(a.sigma, n), a.s, a.m, parse_variant(a.variant));
    } catch (const StagePreconditionFailed& e) {
        std::cerr << "stage precondition failed: " << e.what() << '\n';
        return kVerify;
    } catch (const NotUpSet& e) {
        std::cerr << e.what() << '\n';
        return kVerify;
    } catch (const MatchingTooLarge& e) {
        std::cerr << e.what() << '\n';
        return kVerify;
    }
    if (!a.report.empty()) emit(to_json(r), a.report);
    std::cout << "q " << r.q << "\nz";
    for (long long z : r.z) std::cout << ' ' << z;
    std::cout << "\nlhs " << to_string(r.conclusion_lhs) << "\nrhs " << to_string(r.conclusion_rhs) << "\nviolations "
              << r.violations.size() << "\nverdict " << (r.verdict ? "true" : "false") << '\n';
    for (const std::string& v : r.violations) std::cerr << "violation: " << v << '\n';
    return r.verdict ? kOk : kVerify;
}

int cmd_audit_inequalities(const Args& a) {
    const std::vector<InequalityRecord> records = audit(a.s, a.m_max);
    int bad = 0, expected = 0;
    for (const InequalityRecord& r : records) {
        if (r.in_range && !r.holds) ++bad;
        if (r.expected_fail) ++expected;
    }
    if (!a.out.empty()) {
        const bool csv = a.out.size() >= 4 && a.out.substr(a.out.size() - 4) == ".csv";
        if (csv) {
            std::ofstream f(a.out);
            if (!f) throw UsageError("--out: cannot write '" + a.out + "'");
            f << audit_csv(records);
        } else {
            emit(to_json(records), a.out);
        }
    }
    std::cout << records.size() << " records, " << bad << " in-range failures, " << expected << " expected failures\n";
    return bad == 0 ? kOk : kVerify;
}

int cmd_average(const Args& a) {
    const int n = a.s * a.m + a.s - 2;
    std::vector<SetFamily> families;
    if (!a.family.empty()) families.push_back(read_family_file(a.family));
    std::mt19937_64 rng(a.seed);
    for (int i = 0; i < a.random; ++i) families.push_back(random_family(n, rng, 0.5));
    if (families.empty()) throw UsageError("average needs --family or --random");
    const int threads = env_threads();
    bool ok = true;
    Json runs = Json::array();
    for (const SetFamily& fam : families) {
        const AveragingReport r = averaging_identity(fam, a.s, a.m, parse_variant(a.variant), threads);
        ok = ok && r.holds;
        runs.push_back(to_json(r));
        std::cout << "average " << to_string(r.average_total) << " expected " << to_string(r.expected_total) << ' '
                  << (r.holds ? "ok" : "FAIL") << '\n';
    }
    if (!a.out.empty()) {
        Json j;
        j["schema"] = "matchfree/average-runs/1";
        j["seed"] = a.seed;
        j["threads"] = threads;
        j["runs"] = std::move(runs);
        emit(j, a.out);
    }
    return ok ? kOk : kVerify;
}

int cmd_selftest(const Args& a) {
    AcceptanceOptions o;
    o.seed = a.seed;
    if (!a.only.empty()) {
        std::stringstream ss(a.only);
        std::string item;
        while (std::getline(ss, item, ','))
            try {
                o.only.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw UsageError("--only expects comma-separated criterion numbers, got '" + a.only + "'");
            }
    }
    o.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; };
    std::cout << "seed " << a.seed << std::endl;
    bool ok = true;
    for (const CriterionResult& r : run_acceptance(o)) ok = ok && r.passed;
    return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extremal families without s pairwise disjoint sets: formulas, search, and discharging checks"};
    app.require_subcommand(1);
    Args a;

    auto ns = [&](CLI::App* c) {
        c->add_option("--n", a.n, "ground-set size")->required();
        c->add_option("--s", a.s, "forbidden number of pairwise disjoint sets")->required();
    };
    auto sm = [&](CLI::App* c) {
        c->add_option("--s", a.s, "3 or 4")->required();
        c->add_option("--m", a.m, "n = s*m + s - 2")->required();
    };

    CLI::App* formula = app.add_subcommand("formula", "closed-form e(n,s)");
    ns(formula);
    formula->add_flag("--json", a.json);
    formula->add_option("--out", a.out);

    CLI::App* construct = app.add_subcommand("construct", "write the extremal family");
    ns(construct);
    construct->add_option("--out", a.out, "family file (stdout if omitted)");

    CLI::App* check = app.add_subcommand("check", "size, matching number and formula comparison of a family file");
    check->add_option("--family", a.family);
    check->add_option("--s", a.s);
    check->add_option("--report", a.report, "re-parse and validate a JSON report instead");
    check->add_flag("--json", a.json);
    check->add_option("--out", a.out);

    CLI::App* solve = app.add_subcommand("solve", "exact e(n,s) by branch-and-bound (n <= 20)");
    ns(solve);
    solve->add_option("--budget", a.budget, "seconds");
    solve->add_flag("--shifted", a.shifted, "search shifted families only");
    solve->add_option("--witness", a.witness, "write the best family found");
    solve->add_flag("--json", a.json);
    solve->add_option("--out", a.out);

    CLI::App* config = app.add_subcommand("config", "build G(sigma) and report layer sums");
    sm(config);
    config->add_option("--sigma", a.sigma, "permutation file or 'identity'");
    config->add_option("--variant", a.variant, "full or central-only");
    config->add_flag("--types", a.types, "print the weight types modulo rotation");
    config->add_option("--out", a.out, "write the configuration as JSON");

    CLI::App* audit_config = app.add_subcommand("audit-config", "layer sums, group sums and disjointness catalog");
    sm(audit_config);
    audit_config->add_option("--sigma", a.sigma);
    audit_config->add_option("--variant", a.variant);
    audit_config->add_option("--random", a.random, "additional random permutations");
    audit_config->add_option("--seed", a.seed);
    audit_config->add_option("--out", a.out);

    CLI::App* discharge = app.add_subcommand("discharge", "run the discharging stages on a family");
    discharge->add_option("--family", a.family)->required();
    sm(discharge);
    discharge->add_option("--sigma", a.sigma);
    discharge->add_option("--variant", a.variant);
    discharge->add_option("--report", a.report, "JSON report path");

    CLI::App* ineq = app.add_subcommand("audit-inequalities", "exact check of every stage bound");
    ineq->add_option("--s", a.s)->required();
    ineq->add_option("--m-max", a.m_max);
    ineq->add_option("--out", a.out, "*.csv or *.json");

    CLI::App* average = app.add_subcommand("average", "averaging identity over all n! orders (n <= 8)");
    sm(average);
    average->add_option("--family", a.family);
    average->add_option("--random", a.random, "number of seeded random families");
    average->add_option("--seed", a.seed);
    average->add_option("--variant", a.variant);
    average->add_option("--out", a.out);

    CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
    selftest->add_option("--seed", a.seed);
    selftest->add_option("--only", a.only, "e.g. 1,2,6");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "formula") return cmd_formula(a);
        if (name == "construct") return cmd_construct(a);
        if (name == "check") return cmd_check(a);
        if (name == "solve") return cmd_solve(a);
        if (name == "config") return cmd_config(a);
        if (name == "audit-config") return cmd_audit_config(a);
        if (name == "discharge") return cmd_discharge(a);
        if (name == "audit-inequalities") return cmd_audit_inequalities(a);
        if (name == "average") return cmd_average(a);
        if (name == "selftest") return cmd_selftest(a);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UnsupportedResidue& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const EmptySetPresent& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerify;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerify;
    }
    return kUsage;
}
