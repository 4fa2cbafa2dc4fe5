#include "matchfree/solver.hpp"

#include "matchfree/errors.hpp"
#include "matchfree/formulas.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace matchfree {

namespace {

using Mask = ElementSet::Mask;
using Clock = std::chrono::steady_clock;

// Every partition of [n] into exactly `blocks` non-empty unordered blocks.
void partitions(int n, int blocks, std::vector<std::vector<Mask>>& out) {
    std::vector<Mask> current(static_cast<std::size_t>(blocks), 0);
    // element e goes into an existing block or opens the next one (restricted growth)
    auto place = [&](auto&& self, int e, int used) -> void {
        if (n - e < blocks - used) return;
        if (e == n) {
            if (used == blocks) out.push_back(current);
            return;
        }
        const Mask bit = Mask{1} << e;
        for (int b = 0; b < used; ++b) {
            current[static_cast<std::size_t>(b)] |= bit;
            self(self, e + 1, used);
            current[static_cast<std::size_t>(b)] &= ~bit;
        }
        if (used < blocks) {
            current[static_cast<std::size_t>(used)] |= bit;
            self(self, e + 1, used + 1);
            current[static_cast<std::size_t>(used)] &= ~bit;
        }
    };
    place(place, 0, 0);
}

enum : std::uint8_t { kFree = 0, kMissing = 1, kKept = 2 };

class DownsetSearch {
public:
    DownsetSearch(int n, int s, const SolveOptions& options)
        : n_(n), s_(s), total_(std::size_t{1} << n), shifted_(options.shifted_only),
          deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(options.budget)) {
        partitions(n, s, constraints_);
        occurrences_.resize(total_);
        for (std::size_t c = 0; c < constraints_.size(); ++c)
            for (Mask b : constraints_[c]) occurrences_[b].push_back(static_cast<int>(c));
        state_.assign(total_, kFree);
        hits_.assign(constraints_.size(), 0);
        kept_.assign(constraints_.size(), 0);
        stamp_.assign(total_, 0);

        // Sets of size < n/s + 1 always form a feasible complement.
        const int t = n / s + 1;
        best_size_ = 0;
        best_.assign(total_, false);
        for (std::size_t mask = 0; mask < total_; ++mask)
            if (std::popcount(static_cast<Mask>(mask)) < t) {
                best_[mask] = true;
                ++best_size_;
            }
    }

    void run() {
        // With any s-tuple present the empty set must be missing.
        if (n_ >= s_ - 1 && !add_missing(0)) return;
        if (!propagate()) return;
        dfs();
    }

    bool aborted() const { return aborted_; }
    long long nodes() const { return nodes_; }
    long long best_missing() const { return best_size_; }
    long long lower_bound_missing() const { return aborted_ ? std::min<long long>(abort_lb_, best_size_) : best_size_; }

    SetFamily witness() const {
        std::vector<ElementSet> members;
        for (std::size_t mask = 0; mask < total_; ++mask)
            if (!best_[mask]) members.emplace_back(static_cast<Mask>(mask));
        return SetFamily(n_, std::move(members));
    }

private:
    void set_state(Mask mask, std::uint8_t value) {
        state_[mask] = value;
        trail_.push_back(mask);
        if (value == kMissing) {
            ++missing_;
            for (int c : occurrences_[mask]) ++hits_[static_cast<std::size_t>(c)];
        } else {
            for (int c : occurrences_[mask]) ++kept_[static_cast<std::size_t>(c)];
        }
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            const Mask mask = trail_.back();
            trail_.pop_back();
            if (state_[mask] == kMissing) {
                --missing_;
                for (int c : occurrences_[mask]) --hits_[static_cast<std::size_t>(c)];
            } else {
                for (int c : occurrences_[mask]) --kept_[static_cast<std::size_t>(c)];
            }
            state_[mask] = kFree;
        }
    }

    // Marks mask missing together with everything the down-set (and, when
    // shifted, the shift order) forces. False on contradiction.
    bool add_missing(Mask mask) {
        if (state_[mask] == kKept) return false;
        if (state_[mask] == kMissing) return true;
        work_.clear();
        work_.push_back(mask);
        set_state(mask, kMissing);
        while (!work_.empty()) {
            const Mask cur = work_.back();
            work_.pop_back();
            for (int e = 0; e < n_; ++e) {
                const Mask bit = Mask{1} << e;
                if (!(cur & bit)) continue;
                if (!enqueue(cur ^ bit, kMissing)) return false;
                if (shifted_)
                    for (int f = e + 1; f < n_; ++f)
                        if (!(cur & (Mask{1} << f)) && !enqueue((cur ^ bit) | (Mask{1} << f), kMissing)) return false;
            }
        }
        return true;
    }

    bool add_kept(Mask mask) {
        if (state_[mask] == kMissing) return false;
        if (state_[mask] == kKept) return true;
        work_.clear();
        work_.push_back(mask);
        set_state(mask, kKept);
        while (!work_.empty()) {
            const Mask cur = work_.back();
            work_.pop_back();
            for (int e = 0; e < n_; ++e) {
                const Mask bit = Mask{1} << e;
                if (cur & bit) {
                    if (shifted_)
                        for (int f = 0; f < e; ++f)
                            if (!(cur & (Mask{1} << f)) && !enqueue((cur ^ bit) | (Mask{1} << f), kKept)) return false;
                    continue;
                }
                if (!enqueue(cur | bit, kKept)) return false;
            }
        }
        return true;
    }

    bool enqueue(Mask mask, std::uint8_t value) {
        if (state_[mask] == value) return true;
        if (state_[mask] != kFree) return false;
        set_state(mask, value);
        work_.push_back(mask);
        return true;
    }

    // Unit propagation: an unhit constraint with one free block forces it missing.
    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t c = 0; c < constraints_.size(); ++c) {
                if (hits_[c] > 0) continue;
                const int free_blocks = s_ - kept_[c];
                if (free_blocks == 0) return false;
                if (free_blocks == 1) {
                    for (Mask b : constraints_[c])
                        if (state_[b] == kFree) {
                            if (!add_missing(b)) return false;
                            changed = true;
                            break;
                        }
                }
            }
        }
        return true;
    }

    // Greedy packing of unhit constraints with pairwise disjoint free blocks,
    // each of which needs its own new missing set. Also returns the unhit
    // constraint with fewest free blocks.
    long long packing_bound(int& branch_on) {
        ++epoch_;
        if (epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        order_.clear();
        for (std::size_t c = 0; c < constraints_.size(); ++c)
            if (hits_[c] == 0) order_.push_back(static_cast<int>(c));
        branch_on = -1;
        if (order_.empty()) return 0;
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return kept_[static_cast<std::size_t>(a)] > kept_[static_cast<std::size_t>(b)];
        });
        branch_on = order_.front();
        long long packed = 0;
        for (int c : order_) {
            bool clash = false;
            for (Mask b : constraints_[static_cast<std::size_t>(c)])
                if (state_[b] == kFree && stamp_[b] == epoch_) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            ++packed;
            for (Mask b : constraints_[static_cast<std::size_t>(c)])
                if (state_[b] == kFree) stamp_[b] = epoch_;
        }
        return packed;
    }

    long long new_missing_cost(Mask mask) const {
        long long cost = 0;
        for (Mask sub = mask;; sub = (sub - 1) & mask) {
            if (state_[sub] == kFree) ++cost;
            if (sub == 0) break;
        }
        return cost;
    }

    void dfs() {
        ++nodes_;
        if ((nodes_ & 1023) == 0 && Clock::now() > deadline_) aborted_ = true;
        int branch_on = -1;
        const long long lb = missing_ + packing_bound(branch_on);
        if (aborted_) {
            abort_lb_ = std::min(abort_lb_, lb);
            return;
        }
        if (lb >= best_size_) return;
        if (branch_on < 0) {
            best_size_ = missing_;
            for (std::size_t mask = 0; mask < total_; ++mask) best_[mask] = state_[mask] == kMissing;
            return;
        }

        std::vector<Mask> blocks;
        for (Mask b : constraints_[static_cast<std::size_t>(branch_on)])
            if (state_[b] == kFree) blocks.push_back(b);
        std::stable_sort(blocks.begin(), blocks.end(),
                         [&](Mask a, Mask b) { return new_missing_cost(a) < new_missing_cost(b); });

        const std::size_t frame = trail_.size();
        for (Mask b : blocks) {
            const std::size_t mark = trail_.size();
            if (add_missing(b) && propagate()) dfs();
            undo(mark);
            if (aborted_) {
                abort_lb_ = std::min(abort_lb_, lb);
                break;
            }
            if (!add_kept(b) || !propagate()) break;
        }
        undo(frame);
    }

    int n_;
    int s_;
    std::size_t total_;
    bool shifted_;
    Clock::time_point deadline_;

    std::vector<std::vector<Mask>> constraints_;
    std::vector<std::vector<int>> occurrences_;
    std::vector<std::uint8_t> state_;
    std::vector<int> hits_;
    std::vector<int> kept_;
    std::vector<Mask> trail_;
    std::vector<Mask> work_;
    std::vector<int> order_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;

    long long missing_ = 0;
    long long best_size_ = 0;
    std::vector<bool> best_;
    long long nodes_ = 0;
    bool aborted_ = false;
    long long abort_lb_ = std::numeric_limits<long long>::max();
};

}  // namespace

SolveResult solve_exact(int n, int s, const SolveOptions& options) {
    if (s < 2) throw InvalidParams("s must be at least 2, got " + std::to_string(s));
    if (n < 1 || n > 20) throw InvalidParams("exact search supports 1 <= n <= 20, got " + std::to_string(n));
    const auto start = Clock::now();
    DownsetSearch search(n, s, options);
    search.run();

    SolveResult out;
    out.n = n;
    out.s = s;
    const long long universe = 1LL << n;
    out.value = universe - search.best_missing();
    out.upper_bound = universe - search.lower_bound_missing();
    out.optimal = !search.aborted();
    out.witness = search.witness();
    out.nodes_explored = search.nodes();
    out.elapsed = Clock::now() - start;
    return out;
}

FamilyReport verify_family(const SetFamily& fam, int s) {
    if (s < 2) throw InvalidParams("s must be at least 2");
    FamilyReport r;
    r.n = fam.ground();
    r.s = s;
    r.size = static_cast<long long>(fam.size());
    r.contains_empty = fam.contains(ElementSet{});
    r.is_upset = fam.is_upset();
    if (r.contains_empty) {
        const ElementSet none{};
        const SetFamily rest = fam.without(std::span<const ElementSet>(&none, 1));
        r.nu = rest.empty() ? 1 : std::min(s, 1 + matching_number(rest, s));
    } else {
        r.nu = fam.empty() ? 0 : matching_number(fam, s);
    }
    const Params p = Params::make(fam.ground(), s);
    if (p.residue) {
        const ExtremalValue ev = e_formula(fam.ground(), s);
        if (ev.value.fits_slong_p()) r.formula_value = ev.value.get_si();
        r.matches_formula = r.nu < s && r.formula_value && *r.formula_value == r.size;
    }
    return r;
}

FamilyReport verify_family_file(const std::string& path, int s) { return verify_family(read_family_file(path), s); }

}  // namespace matchfree
