#include "matchfree/config.hpp"

#include "matchfree/errors.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

namespace matchfree {

namespace {

long mod(long a, long n) { return ((a % n) + n) % n; }

std::vector<std::vector<int>> orderings(int count) {
    std::vector<int> p(static_cast<std::size_t>(count));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

// ---------------------------------------------------------------- CyclicOrder

CyclicOrder CyclicOrder::identity(int n) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    return from_sequence(std::move(order));
}

CyclicOrder CyclicOrder::from_sequence(std::vector<int> order) {
    const int n = static_cast<int>(order.size());
    if (n < 1 || n > kMaxGround) throw InvalidParams("cyclic order must have 1..30 elements");
    std::vector<int> position(order.size(), 0);
    for (std::size_t p = 0; p < order.size(); ++p) {
        const int e = order[p];
        if (e < 1 || e > n || position[static_cast<std::size_t>(e - 1)] != 0)
            throw InvalidParams("cyclic order is not a permutation of 1.." + std::to_string(n));
        position[static_cast<std::size_t>(e - 1)] = static_cast<int>(p) + 1;
    }
    CyclicOrder out;
    out.order_ = std::move(order);
    out.position_ = std::move(position);
    return out;
}

int CyclicOrder::element(long label) const {
    return order_[static_cast<std::size_t>(mod(label - 1, n()))];
}

bool CyclicOrder::is_identity() const {
    for (std::size_t p = 0; p < order_.size(); ++p)
        if (order_[p] != static_cast<int>(p) + 1) return false;
    return true;
}

ElementSet CyclicOrder::set_of(std::span<const long> labels) const {
    ElementSet out;
    for (long l : labels) out = out.with(element(l));
    return out;
}

std::string to_string(Role role) {
    switch (role) {
        case Role::Chain: return "chain";
        case Role::MSet: return "m-set";
        case Role::Central: return "central";
        case Role::Lateral: return "lateral";
        case Role::Top: return "top";
    }
    return "?";
}

std::string to_string(Variant variant) { return variant == Variant::Full ? "full" : "central-only"; }

// --------------------------------------------------------------- WeightScheme

WeightScheme WeightScheme::make(int s, int m, Variant variant) {
    const Params p = Params::configuration(s, m);
    WeightScheme w;
    w.s = s;
    w.m = m;
    w.n = p.n;
    w.variant = variant;
    const int n = p.n;
    if (s == 3) {
        w.alpha = Rational((3 * m + 2) * m, 4 * (2 * m + 3) * (2 * m + 1));
        w.alpha.canonicalize();
        w.alpha_prime = 1 - 2 * w.alpha;
        w.lateral_m1 = w.alpha * binom_q(n, m + 1);
        w.central_m1 = w.alpha_prime * binom_q(n, m + 1);
        w.lateral_m2 = make_rational(1, 8) * binom_q(n, m + 2);
        w.central_m2 = make_rational(3, 8) * binom_q(n, m + 2);
        w.top = binom_q(n, m + 3);
        if (variant == Variant::CentralOnly) {
            w.lateral_m1 = 0;
            w.central_m1 = binom_q(n, m + 1);
        }
    } else {
        w.lateral_m1 = make_rational(m, 5 * (3 * m + 2)) * binom_q(n, m + 1);
        w.central_m1 = make_rational(1, 2) * binom_q(n, m + 1) - make_rational(3, 2) * w.lateral_m1;
        w.lateral_m2 = make_rational(1, 22) * binom_q(n, m + 2);
        w.central_m2 = make_rational(8, 11) * binom_q(n, m + 2);
        w.top = binom_q(n, m + 5);
        if (variant == Variant::CentralOnly) {
            w.lateral_m1 = 0;
            w.lateral_m2 = 0;
            w.central_m1 = make_rational(1, 2) * binom_q(n, m + 1);
            w.central_m2 = binom_q(n, m + 2);
        }
    }
    return w;
}

std::vector<int> WeightScheme::weighted_layers() const {
    std::vector<int> out;
    for (int k = 1; k <= m + 2; ++k) out.push_back(k);
    if (s == 3) out.push_back(m + 3);
    else out.push_back(m + 5);
    return out;
}

std::vector<int> WeightScheme::variant_layers() const {
    if (variant == Variant::Full) return {};
    if (s == 3) return {m + 1};
    return {m + 1, m + 2};
}

// ------------------------------------------------------------ XFamilyGeometry

XFamilyGeometry::XFamilyGeometry(int s, int m, CyclicOrder sigma)
    : s_(s), m_(m), n_(Params::configuration(s, m).n), sigma_(std::move(sigma)) {
    if (sigma_.n() != n_)
        throw InvalidParams("cyclic order has " + std::to_string(sigma_.n()) + " elements, expected " + std::to_string(n_));
}

ElementSet XFamilyGeometry::chain(int x, int group, int k) const {
    ElementSet out;
    const long first = first_label(x, group);
    for (long l = first + (m_ - k); l < first + m_; ++l) out = out.with(sigma_.element(l));
    return out;
}

ElementSet XFamilyGeometry::labels(std::initializer_list<long> extra, int x, int group) const {
    ElementSet out = mset(x, group);
    for (long l : extra) out = out.with(sigma_.element(l));
    return out;
}

ElementSet XFamilyGeometry::central_m1(int x, int group) const { return labels({x}, x, group); }

ElementSet XFamilyGeometry::lateral_m1(int x, int group, int other) const {
    return labels({first_label(x, other)}, x, group);
}

ElementSet XFamilyGeometry::central_m2(int x, int group, int other) const {
    return labels({first_label(x, other), x}, x, group);
}

ElementSet XFamilyGeometry::lateral_m2(int x, int group, int other) const {
    const ElementSet base = mset(x, group);
    const long second = first_label(x, other) + 1;
    const int a = sigma_.element(second), b = sigma_.element(second + 1);
    if (!base.contains(a) && !base.contains(b)) return base.with(a).with(b);
    // m < 3: the 2nd/3rd labels of group `other` run into this group's arc;
    // take the next two labels outside it instead.
    ElementSet out = base;
    int taken = 0;
    for (long l = second; taken < 2; ++l) {
        const int e = sigma_.element(l);
        if (base.contains(e)) continue;
        out = out.with(e);
        ++taken;
    }
    return out;
}

ElementSet XFamilyGeometry::top3(int x, int group) const {
    return labels({x, x + 1, m_ + x + 1, 2L * m_ + x + 1}, x, group);
}

ElementSet XFamilyGeometry::central_m1_4(int x, int group, bool minus_one) const {
    return labels({minus_one ? x - 1 : x}, x, group);
}

ElementSet XFamilyGeometry::lateral_m2_4(int x, int group, int other, bool minus_one) const {
    return labels({first_label(x, other), minus_one ? x - 1 : x}, x, group);
}

ElementSet XFamilyGeometry::central_m2_4(int x, int group) const { return labels({x - 1, x}, x, group); }

ElementSet XFamilyGeometry::top4(int x, int group) const {
    return labels({x - 1, x, x + 1, m_ + x + 1, 2L * m_ + x + 1, 3L * m_ + x + 1}, x, group);
}

// -------------------------------------------------------------------- x-family

std::vector<LabeledSet> build_xfamily(const XFamilyGeometry& g, int x, const WeightScheme& w) {
    if (x < 1 || x > g.n()) throw InvalidAnchor("anchor " + std::to_string(x) + " outside [1," + std::to_string(g.n()) + "]");
    if (w.s != g.s() || w.m != g.m()) throw InvalidParams("weight scheme does not match the geometry");
    const int m = g.m();
    std::vector<LabeledSet> out;
    auto add = [&](ElementSet set, int group, int k, Role role, std::string tag, const Rational& weight) {
        out.push_back(LabeledSet{set, x, group, k, role, std::move(tag), weight});
    };
    for (int i = 0; i < g.s(); ++i) {
        for (int k = 1; k < m; ++k) add(g.chain(x, i, k), i, k, Role::Chain, "", w.chain(k));
        add(g.mset(x, i), i, m, Role::MSet, "", w.chain(m));
        if (g.s() == 3) {
            add(g.central_m1(x, i), i, m + 1, Role::Central, "x'=x", w.central_m1);
            for (int j = 0; j < 3; ++j)
                if (j != i) add(g.lateral_m1(x, i, j), i, m + 1, Role::Lateral, "j=" + std::to_string(j), w.lateral_m1);
            for (int j = 0; j < 3; ++j)
                if (j != i) add(g.central_m2(x, i, j), i, m + 2, Role::Central, "x,j=" + std::to_string(j), w.central_m2);
            for (int j = 0; j < 3; ++j)
                if (j != i) add(g.lateral_m2(x, i, j), i, m + 2, Role::Lateral, "j,j=" + std::to_string(j), w.lateral_m2);
            add(g.top3(x, i), i, m + 3, Role::Top, "", w.top);
        } else {
            for (bool minus_one : {true, false})
                add(g.central_m1_4(x, i, minus_one), i, m + 1, Role::Central, minus_one ? "x'=x-1" : "x'=x", w.central_m1);
            for (int j = 0; j < 4; ++j)
                if (j != i) add(g.lateral_m1(x, i, j), i, m + 1, Role::Lateral, "j=" + std::to_string(j), w.lateral_m1);
            for (int j = 0; j < 4; ++j)
                if (j != i)
                    for (bool minus_one : {true, false})
                        add(g.lateral_m2_4(x, i, j, minus_one), i, m + 2, Role::Lateral,
                            std::string(minus_one ? "x'=x-1" : "x'=x") + ",j=" + std::to_string(j), w.lateral_m2);
            add(g.central_m2_4(x, i), i, m + 2, Role::Central, "x-1,x", w.central_m2);
            add(g.top4(x, i), i, m + 5, Role::Top, "", w.top);
        }
    }
    return out;
}

// -------------------------------------------------------------- WeightedConfig

int WeightedConfig::Entry::central_count() const {
    return static_cast<int>(std::count_if(provenance.begin(), provenance.end(),
                                          [](const LabeledSet& l) { return l.role == Role::Central; }));
}

int WeightedConfig::Entry::lateral_count() const {
    return static_cast<int>(std::count_if(provenance.begin(), provenance.end(),
                                          [](const LabeledSet& l) { return l.role == Role::Lateral; }));
}

WeightedConfig::WeightedConfig(XFamilyGeometry geometry, WeightScheme scheme)
    : geometry_(std::move(geometry)), scheme_(std::move(scheme)) {
    for (int x = 1; x <= geometry_.n(); ++x)
        for (LabeledSet& ls : build_xfamily(geometry_, x, scheme_)) {
            if (sgn(ls.weight) == 0) continue;
            Entry& e = entries_[ls.set];
            e.weight += ls.weight;
            e.provenance.push_back(std::move(ls));
        }
}

const WeightedConfig::Entry* WeightedConfig::find(ElementSet set) const {
    const auto it = entries_.find(set);
    return it == entries_.end() ? nullptr : &it->second;
}

Rational WeightedConfig::weight(ElementSet set) const {
    const Entry* e = find(set);
    return e ? e->weight : Rational(0);
}

Rational WeightedConfig::contribution(ElementSet set, int x) const {
    Rational out = 0;
    if (const Entry* e = find(set))
        for (const LabeledSet& l : e->provenance)
            if (l.x == x) out += l.weight;
    return out;
}

SetFamily WeightedConfig::support() const {
    std::vector<ElementSet> members;
    members.reserve(entries_.size());
    for (const auto& [set, entry] : entries_) members.push_back(set);
    return SetFamily(n(), std::move(members));
}

WeightedConfig build_config(int s, int m, const CyclicOrder& sigma, Variant variant) {
    return WeightedConfig(XFamilyGeometry(s, m, sigma), WeightScheme::make(s, m, variant));
}

// ------------------------------------------------------------------- audits

bool LayerSumReport::ok() const {
    return std::none_of(rows.begin(), rows.end(), [](const LayerSumRow& r) { return r.status == LayerSumRow::Status::Mismatch; });
}

LayerSumReport verify_layer_sums(const WeightedConfig& config) {
    const int n = config.n();
    std::map<int, Rational> sums;
    for (const auto& [set, entry] : config.entries()) sums[set.size()] += entry.weight;
    const auto weighted = config.scheme().weighted_layers();
    const auto exempt = config.scheme().variant_layers();

    LayerSumReport report;
    for (int j = 0; j <= n; ++j) {
        const bool is_weighted = std::find(weighted.begin(), weighted.end(), j) != weighted.end();
        if (!is_weighted && !sums.contains(j)) continue;
        LayerSumRow row;
        row.layer = j;
        row.sum = sums.contains(j) ? sums[j] : Rational(0);
        row.expected = is_weighted ? Rational(config.s() * n) * binom_q(n, j) : Rational(0);
        if (std::find(exempt.begin(), exempt.end(), j) != exempt.end()) row.status = LayerSumRow::Status::VariantExempt;
        else row.status = row.sum == row.expected ? LayerSumRow::Status::Ok : LayerSumRow::Status::Mismatch;
        report.rows.push_back(row);
    }
    return report;
}

std::vector<std::string> verify_group_sums(const WeightedConfig& config) {
    std::vector<std::string> bad;
    const int n = config.n();
    for (int x = 1; x <= n; ++x) {
        std::map<std::pair<int, int>, Rational> sums;
        for (const LabeledSet& l : build_xfamily(config.geometry(), x, config.scheme())) {
            if (l.set.size() != l.size_class)
                bad.push_back("x=" + std::to_string(x) + " group=" + std::to_string(l.group) + " " + to_string(l.role) +
                              " " + l.tag + " has size " + std::to_string(l.set.size()) + " not " + std::to_string(l.size_class));
            sums[{l.group, l.set.size()}] += l.weight;
        }
        for (int i = 0; i < config.s(); ++i)
            for (int k : config.scheme().weighted_layers())
                if (sums[{i, k}] != binom_q(n, k))
                    bad.push_back("x=" + std::to_string(x) + " group=" + std::to_string(i) + " k=" + std::to_string(k) +
                                  " sums to " + to_string(sums[{i, k}]));
    }
    return bad;
}

namespace {

class CatalogChecker {
public:
    explicit CatalogChecker(CatalogReport& report) : report_(report) {}

    void check(const std::string& relation, int x, const std::string& roles, std::initializer_list<ElementSet> sets) {
        ++report_.checks;
        std::vector<ElementSet> v(sets);
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = a + 1; b < v.size(); ++b)
                if (!v[a].disjoint(v[b])) {
                    report_.violations.push_back({relation, x, roles + " [" + v[a].to_string() + " meets " + v[b].to_string() + "]"});
                    return;
                }
    }

private:
    CatalogReport& report_;
};

std::string groups(std::initializer_list<int> g) {
    std::string out;
    char name = 'a';
    for (int v : g) {
        if (!out.empty()) out += ',';
        out += std::string(1, name++) + "=" + std::to_string(v);
    }
    return out;
}

void catalog_s3(const XFamilyGeometry& g, CatalogReport& report) {
    CatalogChecker c(report);
    const int m = g.m();
    const bool has_m3 = m >= 3;
    if (!has_m3) report.notes.push_back("relations involving (m-3)-sets or lateral (m+2)-sets skipped for m < 3");
    const auto perms = orderings(3);
    for (int x = 1; x <= g.n(); ++x) {
        for (const auto& p : perms) {
            const int j1 = p[0], j2 = p[1], j3 = p[2];
            const std::string r = groups({j1, j2, j3});
            if (has_m3)
                c.check("table row 1: (m-3)-set, lateral (m+2), central (m+2)", x, r,
                        {g.chain(x, j1, m - 3), g.lateral_m2(x, j2, j1), g.central_m2(x, j3, j1)});
            c.check("table row 2: (m-1)-set, (m-1)-set, (m+3)-set", x, r,
                    {g.chain(x, j1, m - 1), g.chain(x, j2, m - 1), g.top3(x, j3)});
            c.check("table row 3: (m-1)-set, m-set, central (m+2)", x, r,
                    {g.chain(x, j1, m - 1), g.mset(x, j2), g.central_m2(x, j3, j1)});
            c.check("table row 4: (m-1)-set, central (m+1), lateral (m+1)", x, r,
                    {g.chain(x, j1, m - 1), g.central_m1(x, j2), g.lateral_m1(x, j3, j1)});
            c.check("table row 5: m-set, m-set, central (m+1)", x, r,
                    {g.mset(x, j1), g.mset(x, j2), g.central_m1(x, j3)});
            // in-text claims, with i = j1, j = j2 and the remaining group j3
            c.check("central (m+1) vs other m-set", x, r, {g.central_m1(x, j1), g.mset(x, j2)});
            c.check("lateral (m+1) vs (m-1)-set of its group and the remaining m-set", x, r,
                    {g.lateral_m1(x, j1, j2), g.chain(x, j2, m - 1), g.mset(x, j3)});
            c.check("central (m+2) vs (m-1)-set of its group and the remaining m-set", x, r,
                    {g.central_m2(x, j1, j2), g.chain(x, j2, m - 1), g.mset(x, j3)});
            if (has_m3)
                c.check("lateral (m+2) vs (m-3)-set of its group", x, r, {g.lateral_m2(x, j1, j2), g.chain(x, j2, m - 3)});
            if (has_m3)
                c.check("central (m+2) vs lateral (m+2) of the third group", x, r,
                        {g.central_m2(x, j2, j1), g.lateral_m2(x, j3, j1)});
            c.check("(m+3)-set vs other groups' (m-1)-sets", x, r,
                    {g.top3(x, j1), g.chain(x, j2, m - 1), g.chain(x, j3, m - 1)});
        }
    }
}

void catalog_s4(const XFamilyGeometry& g, CatalogReport& report) {
    CatalogChecker c(report);
    const int m = g.m();
    const auto perms = orderings(4);
    const auto perms3 = orderings(3);
    for (int x = 1; x <= g.n(); ++x) {
        for (const auto& p : perms) {
            const int a = p[0], b = p[1], d = p[2], e = p[3];
            const std::string r = groups({a, b, d, e});
            // stage 1: three (m-1)-sets and the (m+5)-set of the fourth group
            c.check("stage 1: three (m-1)-sets vs (m+5)-set", x, r,
                    {g.chain(x, a, m - 1), g.chain(x, b, m - 1), g.chain(x, d, m - 1), g.top4(x, e)});
            // stage 2: (m-1)-sets of a, b; lateral (m+2)-sets of d, e
            for (bool swap_j : {false, true})
                for (bool swap_x : {false, true}) {
                    const int jd = swap_j ? b : a, je = swap_j ? a : b;
                    c.check("stage 2: two (m-1)-sets vs lateral (m+2) pair", x,
                            r + (swap_j ? " j'=b" : " j'=a") + (swap_x ? " x'=x" : " x'=x-1"),
                            {g.chain(x, a, m - 1), g.chain(x, b, m - 1), g.lateral_m2_4(x, d, jd, !swap_x),
                             g.lateral_m2_4(x, e, je, swap_x)});
                }
            // stage 3: (m-1)-set of a; groups b, d, e take lateral(a), central(x-1), central(x) in some order
            const int others[3] = {b, d, e};
            for (const auto& q : perms3) {
                auto pick = [&](int slot) {
                    const int grp = others[q[static_cast<std::size_t>(slot)]];
                    if (slot == 0) return g.lateral_m1(x, grp, a);
                    return g.central_m1_4(x, grp, slot == 1);
                };
                c.check("stage 3: (m-1)-set vs (m+1) triple", x,
                        r + " perm=" + std::to_string(q[0]) + std::to_string(q[1]) + std::to_string(q[2]),
                        {g.chain(x, a, m - 1), pick(0), pick(1), pick(2)});
            }
            c.check("stage 4(i): three m-sets vs central (m+2)", x, r,
                    {g.mset(x, a), g.mset(x, b), g.mset(x, d), g.central_m2_4(x, e)});
            for (bool minus_one : {true, false})
                c.check("stage 4(ii): two m-sets vs central (m+1) pair", x, r + (minus_one ? " d:x-1" : " d:x"),
                        {g.mset(x, a), g.mset(x, b), g.central_m1_4(x, d, minus_one), g.central_m1_4(x, e, !minus_one)});
            // in-text claims
            c.check("central (m+1) vs other m-set", x, r, {g.central_m1_4(x, a, true), g.mset(x, b)});
            c.check("central (m+1) vs other m-set", x, r, {g.central_m1_4(x, a, false), g.mset(x, b)});
            c.check("lateral (m+1) vs (m-1)-set of its group and a third m-set", x, r,
                    {g.lateral_m1(x, a, b), g.chain(x, b, m - 1), g.mset(x, d)});
            for (bool minus_one : {true, false})
                c.check("lateral (m+2) vs (m-1)-set of its group and the two remaining m-sets", x, r,
                        {g.lateral_m2_4(x, a, b, minus_one), g.chain(x, b, m - 1), g.mset(x, d), g.mset(x, e)});
        }
    }
}

}  // namespace

CatalogReport verify_disjointness_catalog(int s, int m, const CyclicOrder& sigma) {
    const XFamilyGeometry g(s, m, sigma);
    CatalogReport report;
    if (s == 3) catalog_s3(g, report);
    else catalog_s4(g, report);
    return report;
}

std::vector<WeightType> weight_type_catalog(const WeightedConfig& config) {
    const int n = config.n();
    const CyclicOrder& sigma = config.sigma();
    std::map<std::tuple<int, std::string, Rational>, WeightType> classes;
    for (const auto& [set, entry] : config.entries()) {
        std::string pattern(static_cast<std::size_t>(n), '0');
        for (int e : set.elements()) pattern[static_cast<std::size_t>(sigma.position(e) - 1)] = '1';
        std::string best = pattern;
        for (int r = 1; r < n; ++r) {
            std::string rotated = pattern.substr(static_cast<std::size_t>(r)) + pattern.substr(0, static_cast<std::size_t>(r));
            best = std::min(best, rotated);
        }
        auto [it, fresh] = classes.try_emplace({set.size(), best, entry.weight});
        WeightType& t = it->second;
        if (fresh) {
            t.size = set.size();
            t.pattern = best;
            t.weight = entry.weight;
            t.normalized = entry.weight / binom_q(n, set.size());
            t.central = entry.central_count();
            t.lateral = entry.lateral_count();
        }
        ++t.count;
    }
    std::vector<WeightType> out;
    for (auto& [key, t] : classes) out.push_back(std::move(t));
    std::sort(out.begin(), out.end(), [](const WeightType& a, const WeightType& b) {
        return a.size != b.size ? a.size < b.size : a.pattern > b.pattern;
    });
    return out;
}

CyclicOrder read_cyclic_order_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open permutation file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<int> order;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                const int v = std::stoi(item, &used);
                if (item.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(item);
                order.push_back(v);
            } catch (const std::exception&) {
                throw ParseError(lineno, "expected an integer, got '" + item + "'");
            }
        }
        if (static_cast<int>(order.size()) != n)
            throw ParseError(lineno, "permutation has " + std::to_string(order.size()) + " entries, expected " + std::to_string(n));
        try {
            return CyclicOrder::from_sequence(std::move(order));
        } catch (const InvalidParams& e) {
            throw ParseError(lineno, e.what());
        }
    }
    throw ParseError(lineno, "permutation file is empty");
}

}  // namespace matchfree
