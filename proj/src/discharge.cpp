#include "matchfree/discharge.hpp"

#include "matchfree/errors.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace matchfree {

ChargeLedger::ChargeLedger(const WeightedConfig& config, const SetFamily& fam)
    : config_(&config), fam_(&fam) {
    const int s = config.s(), m = config.m(), n = config.n();
    for (const auto& [set, entry] : config.entries())
        if (fam.contains(set)) total_[set] = entry.weight;
    portions_.assign(static_cast<std::size_t>(n * s * (m + 1)), Rational(0));
    const XFamilyGeometry& g = config.geometry();
    for (int x = 1; x <= n; ++x)
        for (int group = 0; group < s; ++group)
            for (int k = 1; k <= m; ++k)
                if (fam.contains(g.chain(x, group, k))) portions_[index(x, group, k)] = binom_q(n, k);
}

std::size_t ChargeLedger::index(int x, int group, int k) const {
    const int s = config_->s(), m = config_->m();
    return static_cast<std::size_t>(((x - 1) * s + group) * (m + 1) + k);
}

Rational ChargeLedger::total(ElementSet set) const {
    auto it = total_.find(set);
    return it == total_.end() ? Rational(0) : it->second;
}

Rational ChargeLedger::portion(int x, int group, int k) const { return portions_[index(x, group, k)]; }

Rational ChargeLedger::portions(int x, int group, int k_lo, int k_hi) const {
    Rational sum = 0;
    for (int k = std::max(k_lo, 1); k <= k_hi; ++k) sum += portion(x, group, k);
    return sum;
}

Rational ChargeLedger::take_portions(int x, int group, int k_lo, int k_hi) {
    Rational sum = 0;
    for (int k = std::max(k_lo, 1); k <= k_hi; ++k) {
        Rational& p = portions_[index(x, group, k)];
        if (sgn(p) == 0) continue;
        total_[config_->geometry().chain(x, group, k)] -= p;
        sum += p;
        p = 0;
    }
    return sum;
}

Rational ChargeLedger::pool_m_layer() {
    if (pooled_) return 0;
    pooled_ = true;
    const int s = config_->s(), m = config_->m(), n = config_->n();
    Rational pooled = 0;
    for (int x = 1; x <= n; ++x)
        for (int group = 0; group < s; ++group) pooled += take_portions(x, group, m, m);
    m_pool_ += pooled;
    return pooled;
}

void ChargeLedger::credit(int stage, int x, const std::string& from, ElementSet to, const Rational& amount) {
    if (sgn(amount) == 0) return;
    total_[to] += amount;
    received_[{to, x}] += amount;
    transfers_.push_back({stage, x, from, to, amount});
}

Rational ChargeLedger::received(ElementSet set, int x) const {
    auto it = received_.find({set, x});
    return it == received_.end() ? Rational(0) : it->second;
}

void ChargeLedger::move(int stage, ElementSet from, ElementSet to, const Rational& amount) {
    if (sgn(amount) == 0) return;
    total_[from] -= amount;
    total_[to] += amount;
    transfers_.push_back({stage, 0, "set " + from.to_string(), to, amount});
}

Rational ChargeLedger::grand_total() const {
    Rational sum = m_pool_;
    for (const auto& [set, c] : total_) sum += c;
    return sum;
}

Rational conclusion_bound(int s, int m) {
    const WeightScheme w = WeightScheme::make(s, m);
    const int n = w.n;
    Rational rhs = Rational(s * m) * binom_q(n, m);
    for (int k : w.weighted_layers())
        if (k > m) rhs += Rational(s * n) * binom_q(n, k);
    return rhs;
}

namespace {

std::string group_list(std::initializer_list<int> groups) {
    std::string out;
    for (int g : groups) out += (out.empty() ? "" : ",") + std::to_string(g);
    return out;
}

class Engine {
public:
    Engine(const SetFamily& fam, const WeightedConfig& config)
        : fam_(fam), config_(config), g_(config.geometry()), w_(config.scheme()),
          s_(config.s()), m_(config.m()), n_(config.n()), ledger_(config, fam) {}

    DischargeReport run() {
        report_.s = s_;
        report_.m = m_;
        report_.n = n_;
        report_.variant = w_.variant;
        for (const auto& [set, entry] : config_.entries())
            if (fam_.contains(set)) report_.conclusion_lhs += entry.weight;
        report_.conclusion_rhs = conclusion_bound(s_, m_);
        initial_ = ledger_.grand_total();
        if (initial_ != report_.conclusion_lhs)
            violation("initial ledger total " + to_string(initial_) + " differs from direct sum " +
                      to_string(report_.conclusion_lhs));

        if (w_.variant == Variant::CentralOnly)
            for (const auto& [set, entry] : config_.entries())
                if (set.size() < m_ && fam_.contains(set))
                    fail("central-only weights need a family without sets of size < m; found " + set.to_string());

        if (s_ == 3) {
            stage("Stage 1: (<= m-3)-sets to (m+2)-sets", 1, [&] { stage1_s3(); });
            check_small_zero(m_ - 3, "after Stage 1");
            stage("Stage 2: pairs of (m-1)-sets to (m+3)-sets", 2, [&] { stage2_s3(); });
            stage("Stage 3: (m-1)-set with an m-set to central (m+2)-sets", 3, [&] { stage3_s3(); });
            stage("Stage 4: single (m-1)-sets to (m+1)-sets", 4, [&] { stage4_s3(); });
            check_small_zero(m_ - 1, "after Stage 4");
            stage("Stage 5: pairs of m-sets to central (m+1)-sets", 5, [&] { stage5_s3(); });
        } else {
            stage("Stage 1: triples of (m-1)-sets to (m+5)-sets", 1, [&] { stage1_s4(); });
            stage("Stage 2: pairs of (m-1)-sets to lateral (m+2)-sets", 2, [&] { stage2_s4(); });
            stage("Stage 3: single (m-1)-sets to (m+1)-sets", 3, [&] { stage3_s4(); });
            check_small_zero(m_ - 1, "after Stage 3");
            stage("Stage 4: pairs and triples of m-sets", 4, [&] { stage4_s4(); });
        }
        finish();
        return std::move(report_);
    }

private:
    template <class F>
    void stage(std::string name, int number, F&& body) {
        const std::size_t before = ledger_.transfers().size();
        StageLog log;
        log.stage = number;
        log.name = std::move(name);
        current_ = &log;
        body();
        current_ = nullptr;
        for (std::size_t t = before; t < ledger_.transfers().size(); ++t) {
            ++log.transfers;
            log.moved += ledger_.transfers()[t].amount;
        }
        if (ledger_.grand_total() != initial_) violation("conservation broken in " + log.name);
        report_.stage_logs.push_back(std::move(log));
    }

    void note(std::string text) {
        if (current_) current_->notes.push_back(std::move(text));
    }

    void violation(std::string text) { report_.violations.push_back(std::move(text)); }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "s=" << s_ << " m=" << m_ << " n=" << n_ << ": " << what;
        throw StagePreconditionFailed(os.str());
    }

    bool in_f(ElementSet set) const { return fam_.contains(set); }

    // Smallest missing member of a tuple the proof says cannot lie wholly in F.
    ElementSet pick_missing(std::initializer_list<ElementSet> options, int x, const std::string& what) const {
        std::optional<ElementSet> best;
        for (ElementSet c : options)
            if (!in_f(c) && (!best || c < *best)) best = c;
        if (!best) {
            std::string list;
            for (ElementSet c : options) list += " " + c.to_string();
            fail(what + " at x=" + std::to_string(x) + ": every candidate is in F:" + list);
        }
        return *best;
    }

    void require_missing(ElementSet set, int x, const std::string& what) const {
        if (in_f(set)) fail(what + " at x=" + std::to_string(x) + ": receiver " + set.to_string() + " is in F");
    }

    // Tracks the largest amount seen against a stated stage bound.
    void bound(const std::string& name, const Rational& value, const Rational& cap, int x) {
        auto it = std::find_if(bounds_.begin(), bounds_.end(), [&](const CapCheck& c) { return c.name == name; });
        if (it == bounds_.end()) {
            bounds_.push_back({name, value, cap, true});
            it = std::prev(bounds_.end());
        } else if (value > it->value) {
            it->value = value;
        }
        if (value > cap) {
            it->ok = false;
            violation(name + " exceeded at x=" + std::to_string(x) + ": " + to_string(value) + " > " + to_string(cap));
        }
    }

    void give(int stage, int x, const std::string& from, ElementSet to, const Rational& amount, bool per_x = true) {
        ledger_.credit(stage, x, from, to, amount);
        if (!per_x) return;
        const Rational got = ledger_.received(to, x);
        const Rational cap = config_.contribution(to, x);
        if (got > cap)
            violation("per-x cap: " + to.to_string() + " received " + to_string(got) + " from x=" + std::to_string(x) +
                      ", its weight there is " + to_string(cap));
    }

    void check_small_zero(int up_to, const std::string& when) {
        for (int x = 1; x <= n_; ++x)
            for (int group = 0; group < s_; ++group)
                if (sgn(ledger_.portions(x, group, 1, up_to)) != 0)
                    violation("charge left on a (<= " + std::to_string(up_to) + ")-set " + when + " at x=" +
                              std::to_string(x) + " group " + std::to_string(group));
    }

    std::array<int, 2> others3(int i) const {
        std::array<int, 2> out{};
        int p = 0;
        for (int j = 0; j < 3; ++j)
            if (j != i) out[static_cast<std::size_t>(p++)] = j;
        return out;
    }

    std::vector<int> others(int i) const {
        std::vector<int> out;
        for (int j = 0; j < s_; ++j)
            if (j != i) out.push_back(j);
        return out;
    }

    Rational C(int k) const { return binom_q(n_, k); }
    int low() const { return std::max(1, m_ - 2); }

    // ---- s = 3 ----

    void stage1_s3() {
        if (m_ - 3 < 1) {
            note("no (m-3)-sets for m < 4");
            return;
        }
        for (int x = 1; x <= n_; ++x)
            for (int i = 0; i < 3; ++i) {
                if (sgn(ledger_.portions(x, i, 1, m_ - 3)) == 0) continue;
                const auto [j1, j2] = others3(i);
                const ElementSet r1 = pick_missing({g_.lateral_m2(x, j1, i), g_.central_m2(x, j2, i)}, x, "Stage 1");
                const ElementSet r2 = pick_missing({g_.lateral_m2(x, j2, i), g_.central_m2(x, j1, i)}, x, "Stage 1");
                const Rational half = ledger_.take_portions(x, i, 1, m_ - 3) / 2;
                const std::string from = "chain g=" + std::to_string(i) + " k<=m-3";
                give(1, x, from, r1, half);
                give(1, x, from, r2, half);
                bound("stage1 half-charge <= C(n,m+2)/16", half, C(m_ + 2) / 16, x);
            }
    }

    void stage2_s3() {
        if (m_ - 1 < 1) return;
        for (int x = 1; x <= n_; ++x)
            for (int i = 0; i < 3; ++i) {
                const auto [j1, j2] = others3(i);
                if (!in_f(g_.chain(x, j1, m_ - 1)) || !in_f(g_.chain(x, j2, m_ - 1))) continue;
                if (sgn(ledger_.portions(x, j1, low(), m_ - 1) + ledger_.portions(x, j2, low(), m_ - 1)) == 0) continue;
                const ElementSet r = g_.top3(x, i);
                require_missing(r, x, "Stage 2");
                const Rational amount =
                    ledger_.take_portions(x, j1, low(), m_ - 1) + ledger_.take_portions(x, j2, low(), m_ - 1);
                give(2, x, "chains g=" + group_list({j1, j2}) + " k=m-2..m-1", r, amount);
                bound("stage2 charge <= w_{m+3}", amount, w_.top, x);
            }
    }

    void stage3_s3() {
        if (m_ - 1 < 1) return;
        for (int x = 1; x <= n_; ++x)
            for (int j1 = 0; j1 < 3; ++j1)
                for (int j2 = 0; j2 < 3; ++j2) {
                    if (j1 == j2) continue;
                    const int i = 3 - j1 - j2;
                    if (!in_f(g_.chain(x, j1, m_ - 1)) || !in_f(g_.mset(x, j2))) continue;
                    if (sgn(ledger_.portions(x, j1, low(), m_ - 1)) == 0) continue;
                    const ElementSet r = g_.central_m2(x, i, j1);
                    require_missing(r, x, "Stage 3");
                    const Rational amount = ledger_.take_portions(x, j1, low(), m_ - 1);
                    give(3, x, "chain g=" + std::to_string(j1) + " k=m-2..m-1", r, amount);
                    bound("stage3 charge <= C(n,m+2)/4", amount, C(m_ + 2) / 4, x);
                }
    }

    void stage4_s3() {
        if (m_ - 1 < 1) return;
        for (int x = 1; x <= n_; ++x)
            for (int i = 0; i < 3; ++i) {
                if (sgn(ledger_.portions(x, i, low(), m_ - 1)) == 0) continue;
                const auto [j1, j2] = others3(i);
                const ElementSet r1 = pick_missing({g_.central_m1(x, j1), g_.lateral_m1(x, j2, i)}, x, "Stage 4");
                const ElementSet r2 = pick_missing({g_.lateral_m1(x, j1, i), g_.central_m1(x, j2)}, x, "Stage 4");
                const Rational half = ledger_.take_portions(x, i, low(), m_ - 1) / 2;
                const std::string from = "chain g=" + std::to_string(i) + " k=m-2..m-1";
                give(4, x, from, r1, half);
                give(4, x, from, r2, half);
                bound("stage4 half-charge <= w^l_{m+1}", half, w_.lateral_m1, x);
            }
    }

    // z_x and q over the m-arcs of G(sigma).
    std::vector<int> count_msets() {
        std::vector<int> zx(static_cast<std::size_t>(n_ + 1), 0);
        report_.z.assign(static_cast<std::size_t>(s_ + 1), 0);
        for (int x = 1; x <= n_; ++x) {
            for (int i = 0; i < s_; ++i)
                if (in_f(g_.mset(x, i))) ++zx[static_cast<std::size_t>(x)];
            const int z = zx[static_cast<std::size_t>(x)];
            if (z >= s_) fail("x-family at x=" + std::to_string(x) + " has " + std::to_string(z) + " disjoint m-sets in F");
            ++report_.z[static_cast<std::size_t>(z)];
        }
        long long q = 0;
        for (const auto& [set, entry] : config_.entries())
            if (set.size() == m_ && in_f(set)) ++q;
        report_.q = q;
        long long weighted = 0;
        for (int j = 0; j < s_; ++j) weighted += j * report_.z[static_cast<std::size_t>(j)];
        if (weighted != s_ * q)
            violation("z identity: sum j*z_j = " + std::to_string(weighted) + " but s*q = " + std::to_string(s_ * q));
        return zx;
    }

    bool has_small_in_f() const {
        for (const auto& [set, entry] : config_.entries())
            if (set.size() == m_ - 1 && in_f(set)) return true;
        return false;
    }

    void stage5_s3() {
        ledger_.pool_m_layer();
        const std::vector<int> zx = count_msets();
        const long long q = report_.q, z2 = report_.z[2];
        if (q <= m_) {
            note("q <= m, nothing to move");
            return;
        }
        if (z2 == 0) fail("q > m but no x-family holds two m-sets");
        const Rational amount = make_rational(3 * (q - m_), z2) * C(m_);
        const bool special = w_.variant == Variant::Full && q == m_ + 1 && z2 == 2;
        std::vector<ElementSet> receivers;
        for (int x = 1; x <= n_; ++x) {
            if (zx[static_cast<std::size_t>(x)] != 2) continue;
            int i = 0;
            while (in_f(g_.mset(x, i))) ++i;
            const ElementSet r = g_.central_m1(x, i);
            require_missing(r, x, "Stage 5");
            if (sgn(ledger_.received(r, x)) != 0)
                fail("Stage 5 at x=" + std::to_string(x) + ": central set " + r.to_string() +
                     " already charged within its x-family");
            ledger_.debit_pool(amount);
            give(5, x, "m-pool", r, amount, !special);
            if (!special) bound("stage5 charge <= w^c_{m+1}", amount, w_.central_m1, x);
            if (std::find(receivers.begin(), receivers.end(), r) == receivers.end()) receivers.push_back(r);
        }
        if (special) resolve_special(receivers);
    }

    void resolve_special(const std::vector<ElementSet>& receivers) {
        const bool shared = receivers.size() == 1;
        report_.special_case = shared ? "shared-1a" : "two-1b";
        note("q = m+1 with z2 = 2 (" + report_.special_case + "); capped against total weight");
        for (ElementSet r : receivers) {
            const WeightedConfig::Entry* e = config_.find(r);
            const bool is_1a = e && e->central_count() == 2 && e->lateral_count() == 2;
            const bool is_1b = e && e->central_count() == 1 && e->lateral_count() == 1;
            if ((shared && !is_1a) || (!shared && !is_1b))
                note("receiver " + r.to_string() + " is not of the expected type");
        }

        Rational excess_total = 0;
        for (ElementSet r : receivers) {
            const Rational e = ledger_.total(r) - config_.weight(r);
            if (sgn(e) > 0) excess_total += e;
        }
        if (sgn(excess_total) == 0) return;
        if (!has_small_in_f()) {
            violation("Stage 5 special case overcharges " + to_string(excess_total) + " with no (m-1)-set in F");
            return;
        }

        struct Candidate {
            ElementSet set;
            int rank;  // 0: type 1b disjoint from an (m-1)-set of F, 1: other 1b, 2: type 1a
            Rational spare;
        };
        std::vector<ElementSet> small;
        for (const auto& [set, entry] : config_.entries())
            if (set.size() == m_ - 1 && in_f(set)) small.push_back(set);
        std::vector<Candidate> pool;
        for (const auto& [set, entry] : config_.entries()) {
            if (set.size() != m_ + 1 || in_f(set)) continue;
            if (std::find(receivers.begin(), receivers.end(), set) != receivers.end()) continue;
            const Rational spare = entry.weight - ledger_.total(set);
            if (sgn(spare) <= 0) continue;
            const int c = entry.central_count(), l = entry.lateral_count();
            int rank;
            if (c == 1 && l == 1) {
                const bool forbidden =
                    std::any_of(small.begin(), small.end(), [&](ElementSet f) { return f.disjoint(set); });
                rank = forbidden ? 0 : 1;
            } else if (c == 2 && l == 2) {
                rank = 2;
            } else {
                continue;
            }
            pool.push_back({set, rank, spare});
        }
        std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
            if (a.rank != b.rank) return a.rank < b.rank;
            if (a.spare != b.spare) return a.spare > b.spare;
            return a.set < b.set;
        });

        std::size_t next = 0;
        for (ElementSet r : receivers) {
            Rational excess = ledger_.total(r) - config_.weight(r);
            while (sgn(excess) > 0 && next < pool.size()) {
                Candidate& c = pool[next];
                const Rational amount = excess < c.spare ? excess : c.spare;
                ledger_.move(5, r, c.set, amount);
                note("overflow " + to_string(amount) + " from " + r.to_string() + " to M1 = " + c.set.to_string());
                if (c.rank == 2) report_.type_1a_fallback = true;
                if (c.rank == 1) note("M1 " + c.set.to_string() + " is not disjoint from an (m-1)-set of F");
                excess -= amount;
                c.spare -= amount;
                if (sgn(c.spare) == 0) ++next;
            }
            if (sgn(excess) > 0)
                violation("Stage 5 special case: " + to_string(excess) + " overflow on " + r.to_string() +
                          " has no receiver");
        }
        if (report_.type_1a_fallback) note("type-1a fallback used");
    }

    // ---- s = 4 ----

    void stage1_s4() {
        if (m_ - 1 < 1) return;
        for (int x = 1; x <= n_; ++x)
            for (int j = 0; j < 4; ++j) {
                const std::vector<int> tri = others(j);
                if (!std::all_of(tri.begin(), tri.end(), [&](int i) { return in_f(g_.chain(x, i, m_ - 1)); }))
                    continue;
                Rational avail = 0;
                for (int i : tri) avail += ledger_.portions(x, i, 1, m_ - 1);
                if (sgn(avail) == 0) continue;
                const ElementSet r = g_.top4(x, j);
                require_missing(r, x, "Stage 1");
                Rational amount = 0;
                for (int i : tri) amount += ledger_.take_portions(x, i, 1, m_ - 1);
                give(1, x, "chains g=" + group_list({tri[0], tri[1], tri[2]}) + " k<=m-1", r, amount);
                bound("stage1 charge <= w_{m+5}", amount, w_.top, x);
            }
    }

    void stage2_s4() {
        if (m_ - 1 < 1) return;
        for (int x = 1; x <= n_; ++x)
            for (int j1 = 0; j1 < 4; ++j1)
                for (int j2 = j1 + 1; j2 < 4; ++j2) {
                    if (!in_f(g_.chain(x, j1, m_ - 1)) || !in_f(g_.chain(x, j2, m_ - 1))) continue;
                    if (sgn(ledger_.portions(x, j1, 1, m_ - 1) + ledger_.portions(x, j2, 1, m_ - 1)) == 0) continue;
                    std::vector<int> rest;
                    for (int i = 0; i < 4; ++i)
                        if (i != j1 && i != j2) rest.push_back(i);
                    const int i1 = rest[0], i2 = rest[1];
                    std::vector<ElementSet> rs;
                    for (auto [ja, jb] : {std::pair{j1, j2}, std::pair{j2, j1}})
                        for (bool mo : {true, false})
                            rs.push_back(pick_missing(
                                {g_.lateral_m2_4(x, i1, ja, mo), g_.lateral_m2_4(x, i2, jb, !mo)}, x, "Stage 2"));
                    const Rational quarter =
                        (ledger_.take_portions(x, j1, 1, m_ - 1) + ledger_.take_portions(x, j2, 1, m_ - 1)) / 4;
                    for (ElementSet r : rs) give(2, x, "chains g=" + group_list({j1, j2}) + " k<=m-1", r, quarter);
                    bound("stage2 quarter-charge <= w^l_{m+2}", quarter, w_.lateral_m2, x);
                }
    }

    void stage3_s4() {
        if (m_ - 1 < 1) return;
        for (int x = 1; x <= n_; ++x)
            for (int i = 0; i < 4; ++i) {
                if (sgn(ledger_.portions(x, i, 1, m_ - 1)) == 0) continue;
                const std::vector<int> js = others(i);
                // cells[row][col]: group js[row] extended by i's first label, x-1, or x
                std::array<std::array<ElementSet, 3>, 3> cells{};
                std::vector<ElementSet> missing;
                for (std::size_t r = 0; r < 3; ++r) {
                    cells[r] = {g_.lateral_m1(x, js[r], i), g_.central_m1_4(x, js[r], true),
                                g_.central_m1_4(x, js[r], false)};
                    for (ElementSet c : cells[r])
                        if (!in_f(c)) missing.push_back(c);
                }
                std::array<int, 3> perm{0, 1, 2};
                do {
                    bool hit = false;
                    for (std::size_t r = 0; r < 3; ++r) hit = hit || !in_f(cells[r][static_cast<std::size_t>(perm[r])]);
                    if (!hit) fail("Stage 3 at x=" + std::to_string(x) + ": a triple of (m+1)-sets lies in F");
                } while (std::next_permutation(perm.begin(), perm.end()));
                if (missing.size() < 3) fail("Stage 3 at x=" + std::to_string(x) + ": fewer than three missing sets");
                std::sort(missing.begin(), missing.end());
                const Rational third = ledger_.take_portions(x, i, 1, m_ - 1) / 3;
                for (std::size_t k = 0; k < 3; ++k)
                    give(3, x, "chain g=" + std::to_string(i) + " k<=m-1", missing[k], third);
                bound("stage3 third-charge <= w^l_{m+1}", third, w_.lateral_m1, x);
            }
    }

    void stage4_s4() {
        ledger_.pool_m_layer();
        const std::vector<int> zx = count_msets();
        const long long q = report_.q;
        if (q <= m_) {
            note("q <= m, nothing to move");
            return;
        }
        const long long denom = 4 * q - n_;
        const Rational triple_amount = make_rational(8 * (q - m_), denom) * C(m_);
        const Rational pair_amount = make_rational(2 * (q - m_), denom) * C(m_);
        Rational moved = 0;
        for (int x = 1; x <= n_; ++x) {
            const int z = zx[static_cast<std::size_t>(x)];
            if (z == 3) {
                int i = 0;
                while (in_f(g_.mset(x, i))) ++i;
                const ElementSet r = g_.central_m2_4(x, i);
                require_missing(r, x, "Stage 4(i)");
                if (sgn(ledger_.received(r, x)) != 0)
                    fail("Stage 4(i) at x=" + std::to_string(x) + ": " + r.to_string() + " already charged");
                ledger_.debit_pool(triple_amount);
                give(4, x, "m-pool", r, triple_amount);
                bound("stage4(i) charge <= w^c_{m+2}", triple_amount, w_.central_m2, x);
                moved += triple_amount;
            } else if (z == 2) {
                std::vector<int> absent;
                for (int i = 0; i < 4; ++i)
                    if (!in_f(g_.mset(x, i))) absent.push_back(i);
                const int i1 = absent[0], i2 = absent[1];
                for (bool mo : {true, false}) {
                    const ElementSet r = pick_missing(
                        {g_.central_m1_4(x, i1, mo), g_.central_m1_4(x, i2, !mo)}, x, "Stage 4(ii)");
                    const Rational before = ledger_.received(r, x);
                    if (before > w_.lateral_m1)
                        fail("Stage 4(ii) at x=" + std::to_string(x) + ": " + r.to_string() + " already holds " +
                             to_string(before));
                    ledger_.debit_pool(pair_amount);
                    give(5, x, "m-pool", r, pair_amount);
                    moved += pair_amount;
                }
                bound("stage4(ii) charge <= w^c_{m+1} - w^l_{m+1}", pair_amount, w_.central_m1 - w_.lateral_m1, x);
            }
        }
        if (moved < make_rational(4 * (q - m_), 1) * C(m_))
            violation("Stage 4 moved " + to_string(moved) + " < 4(q-m)C(n,m)");
    }

    void finish() {
        // (A) small sets
        Rational small_left = 0;
        Rational worst_excess = 0;
        bool over = false;
        for (const auto& [set, charge] : ledger_.totals()) {
            if (set.size() < m_) {
                small_left += charge;
                if (sgn(charge) != 0) violation("(A) " + set.to_string() + " keeps charge " + to_string(charge));
            } else if (set.size() > m_) {
                const Rational excess = charge - config_.weight(set);
                if (!over || excess > worst_excess) worst_excess = excess;
                over = true;
                if (sgn(excess) > 0)
                    violation("(B) " + set.to_string() + " holds " + to_string(charge) + " > weight " +
                              to_string(config_.weight(set)));
            }
        }
        report_.caps.push_back({"(A) charge on (<= m-1)-sets", small_left, 0, sgn(small_left) == 0});
        report_.caps.push_back({"(B) max charge minus weight, (>= m+1)-sets", worst_excess, 0, sgn(worst_excess) <= 0});
        report_.m_layer_charge = ledger_.m_pool();
        report_.m_layer_cap = Rational(s_ * m_) * C(m_);
        const bool c_ok = report_.m_layer_charge <= report_.m_layer_cap;
        if (!c_ok) violation("(C) m-layer charge " + to_string(report_.m_layer_charge) + " above s*m*C(n,m)");
        report_.caps.push_back({"(C) m-layer charge", report_.m_layer_charge, report_.m_layer_cap, c_ok});
        report_.ledger_total = ledger_.grand_total();
        const bool d_ok = report_.ledger_total == report_.conclusion_lhs;
        if (!d_ok) violation("(D) ledger total differs from the direct sum");
        report_.caps.push_back({"(D) ledger total vs direct sum", report_.ledger_total, report_.conclusion_lhs, d_ok});
        for (CapCheck& c : bounds_) report_.caps.push_back(std::move(c));
        report_.caps.push_back({"conclusion", report_.conclusion_lhs, report_.conclusion_rhs,
                                report_.conclusion_lhs <= report_.conclusion_rhs});
        report_.transfers = ledger_.transfers();
        report_.verdict = report_.violations.empty() && report_.conclusion_lhs <= report_.conclusion_rhs;
    }

    const SetFamily& fam_;
    const WeightedConfig& config_;
    const XFamilyGeometry& g_;
    const WeightScheme& w_;
    int s_, m_, n_;
    ChargeLedger ledger_;
    DischargeReport report_;
    Rational initial_;
    StageLog* current_ = nullptr;
    std::vector<CapCheck> bounds_;
};

}  // namespace

DischargeReport run_discharge(const SetFamily& fam, const WeightedConfig& config) {
    if (fam.ground() != config.n())
        throw InvalidParams("family has n=" + std::to_string(fam.ground()) + " but the configuration needs n=" +
                            std::to_string(config.n()));
    if (!fam.is_upset()) throw NotUpSet("the family is not an up-set");
    if (fam.contains(ElementSet{})) throw MatchingTooLarge("the family contains the empty set");
    const int nu = matching_number(fam, config.s());
    if (nu >= config.s())
        throw MatchingTooLarge("the family has " + std::to_string(config.s()) + " pairwise disjoint members");
    return Engine(fam, config).run();
}

DischargeReport run_discharge(const SetFamily& fam, const CyclicOrder& sigma, int s, int m, Variant variant) {
    const WeightedConfig config = build_config(s, m, sigma, variant);
    return run_discharge(fam, config);
}

}  // namespace matchfree
