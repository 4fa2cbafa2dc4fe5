#include "matchfree/family.hpp"

#include "matchfree/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace matchfree {

namespace {

using Mask = ElementSet::Mask;

constexpr int kSosLimit = 24;

void check_ground(int n) {
    if (n < 1 || n > kMaxGround) throw InvalidParams("ground-set size must be in [1, 30], got " + std::to_string(n));
}

std::vector<std::uint8_t> dense_of(const SetFamily& fam) {
    std::vector<std::uint8_t> out(std::size_t{1} << fam.ground(), 0);
    for (ElementSet s : fam) out[s.bits()] = 1;
    return out;
}

SetFamily from_dense(int n, const std::vector<std::uint8_t>& dense) {
    std::vector<ElementSet> members;
    for (std::size_t mask = 0; mask < dense.size(); ++mask)
        if (dense[mask]) members.emplace_back(static_cast<Mask>(mask));
    return SetFamily(n, std::move(members));
}

// Branches on the smallest element still coverable: either one of the
// candidates containing it joins the packing, or the element stays unused.
void pack(std::vector<Mask> cands, int depth, int cap, int& best) {
    if (depth > best) best = depth;
    if (best >= cap || cands.empty()) return;

    Mask uni = 0;
    int min_size = 64;
    for (Mask c : cands) {
        uni |= c;
        min_size = std::min(min_size, std::popcount(c));
    }
    if (depth + std::popcount(uni) / min_size <= best) return;

    const Mask low = uni & (~uni + 1);
    std::vector<Mask> next;
    next.reserve(cands.size());
    for (Mask c : cands) {
        if (!(c & low)) continue;
        next.clear();
        for (Mask d : cands)
            if ((d & c) == 0) next.push_back(d);
        pack(next, depth + 1, cap, best);
        if (best >= cap) return;
    }
    next.clear();
    for (Mask d : cands)
        if (!(d & low)) next.push_back(d);
    pack(std::move(next), depth, cap, best);
}

// Inclusion-minimal elements of an arbitrary collection of masks.
std::vector<Mask> minimal_masks(std::vector<Mask> sets) {
    std::sort(sets.begin(), sets.end(), [](Mask a, Mask b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<Mask> out;
    for (Mask s : sets) {
        bool dominated = false;
        for (Mask t : out)
            if ((t & ~s) == 0) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(s);
    }
    return out;
}

int parse_int(std::string_view text, int line, const char* what) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(text) + "'");
    return value;
}

}  // namespace

std::string to_string(ResidueClass rc) {
    switch (rc) {
        case ResidueClass::SmMinus1: return "sm-1";
        case ResidueClass::Sm: return "sm";
        case ResidueClass::SmPlusSMinus2: return "sm+s-2";
    }
    return "?";
}

Params Params::make(int n, int s) {
    check_ground(n);
    if (s < 2) throw InvalidParams("s must be at least 2, got " + std::to_string(s));
    Params p{n, s, std::nullopt, std::nullopt};
    // For s = 2 the classes sm and sm+s-2 coincide; sm wins.
    if (n % s == 0) {
        p.m = n / s;
        p.residue = ResidueClass::Sm;
    } else if ((n + 1) % s == 0) {
        p.m = (n + 1) / s;
        p.residue = ResidueClass::SmMinus1;
    } else if ((n + 2) % s == 0 && n - s + 2 >= s) {
        p.m = (n - s + 2) / s;
        p.residue = ResidueClass::SmPlusSMinus2;
    }
    return p;
}

Params Params::configuration(int s, int m) {
    if (s != 3 && s != 4) throw InvalidParams("configurations exist for s = 3 and s = 4 only");
    if (m < 1) throw InvalidParams("m must be at least 1");
    const int n = s * m + s - 2;
    check_ground(n);
    return Params{n, s, m, ResidueClass::SmPlusSMinus2};
}

SetFamily::SetFamily(int n) : n_(n) {
    check_ground(n);
    build_index();
}

SetFamily::SetFamily(int n, std::vector<ElementSet> members) : n_(n), members_(std::move(members)) {
    check_ground(n);
    for (ElementSet s : members_)
        if (!s.fits(n)) throw InvalidParams("set " + s.to_string() + " exceeds ground set [" + std::to_string(n) + "]");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    build_index();
}

void SetFamily::build_index() {
    dense_.clear();
    if (n_ > kDenseLimit) return;
    dense_.assign(std::size_t{1} << n_, false);
    for (ElementSet s : members_) dense_[s.bits()] = true;
}

SetFamily SetFamily::all_sets(int n) { return layers_from(n, 0); }

SetFamily SetFamily::layers_from(int n, int k) {
    check_ground(n);
    std::vector<ElementSet> members;
    for (Mask mask = 0; mask <= ElementSet::full(n).bits(); ++mask) {
        if (std::popcount(mask) >= k) members.emplace_back(mask);
        if (mask == ElementSet::full(n).bits()) break;
    }
    return SetFamily(n, std::move(members));
}

SetFamily SetFamily::star(int n, int element) {
    check_ground(n);
    if (element < 1 || element > n) throw InvalidParams("star centre outside [n]");
    std::vector<ElementSet> members;
    const Mask full = ElementSet::full(n).bits();
    for (Mask mask = 0;; ++mask) {
        if (ElementSet(mask).contains(element)) members.emplace_back(mask);
        if (mask == full) break;
    }
    return SetFamily(n, std::move(members));
}

bool SetFamily::contains(ElementSet set) const {
    if (!set.fits(n_)) return false;
    if (!dense_.empty()) return dense_[set.bits()];
    return std::binary_search(members_.begin(), members_.end(), set);
}

std::vector<ElementSet> SetFamily::layer(int k) const {
    std::vector<ElementSet> out;
    for (ElementSet s : members_)
        if (s.size() == k) out.push_back(s);
    return out;
}

std::size_t SetFamily::layer_count(int k) const {
    return static_cast<std::size_t>(
        std::count_if(members_.begin(), members_.end(), [k](ElementSet s) { return s.size() == k; }));
}

bool SetFamily::is_upset() const {
    for (ElementSet s : members_)
        for (int e = 1; e <= n_; ++e)
            if (!s.contains(e) && !contains(s.with(e))) return false;
    return true;
}

SetFamily SetFamily::with(std::span<const ElementSet> extra) const {
    std::vector<ElementSet> members = members_;
    members.insert(members.end(), extra.begin(), extra.end());
    return SetFamily(n_, std::move(members));
}

SetFamily SetFamily::without(std::span<const ElementSet> removed) const {
    std::unordered_set<ElementSet> drop(removed.begin(), removed.end());
    std::vector<ElementSet> members;
    for (ElementSet s : members_)
        if (!drop.contains(s)) members.push_back(s);
    return SetFamily(n_, std::move(members));
}

SetFamily SetFamily::relabeled(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != n_) throw InvalidParams("relabeling has wrong length");
    std::vector<ElementSet> members;
    members.reserve(members_.size());
    for (ElementSet s : members_) {
        Mask image = 0;
        for (int e : s.elements()) image |= Mask{1} << (perm[static_cast<std::size_t>(e - 1)] - 1);
        members.emplace_back(image);
    }
    return SetFamily(n_, std::move(members));
}

int packing_number(std::span<const ElementSet> sets, ElementSet blocked, int cap) {
    std::vector<Mask> cands;
    cands.reserve(sets.size());
    for (ElementSet s : sets) {
        if (!s.disjoint(blocked)) continue;
        if (s.empty()) throw EmptySetPresent("matching number is undefined for families containing the empty set");
        cands.push_back(s.bits());
    }
    int best = 0;
    if (cap <= 0) return 0;
    pack(minimal_masks(std::move(cands)), 0, cap, best);
    return std::min(best, cap);
}

int matching_number(const SetFamily& fam, int cap) {
    if (cap < 1) throw InvalidParams("cap must be at least 1");
    if (fam.contains(ElementSet{})) throw EmptySetPresent("matching number is undefined for families containing the empty set");
    const SetFamily minimal = minimal_members(fam);
    std::vector<Mask> cands;
    cands.reserve(minimal.size());
    for (ElementSet s : minimal) cands.push_back(s.bits());
    int best = 0;
    pack(std::move(cands), 0, cap, best);
    return std::min(best, cap);
}

SetFamily upset_closure(const SetFamily& fam) {
    const int n = fam.ground();
    if (n <= kSosLimit) {
        auto dense = dense_of(fam);
        const std::size_t total = dense.size();
        for (int b = 0; b < n; ++b) {
            const std::size_t bit = std::size_t{1} << b;
            for (std::size_t mask = 0; mask < total; ++mask)
                if (!(mask & bit) && dense[mask]) dense[mask | bit] = 1;
        }
        return from_dense(n, dense);
    }
    std::unordered_set<ElementSet> seen(fam.begin(), fam.end());
    std::vector<ElementSet> frontier(fam.begin(), fam.end());
    while (!frontier.empty()) {
        std::vector<ElementSet> next;
        for (ElementSet s : frontier)
            for (int e = 1; e <= n; ++e)
                if (!s.contains(e) && seen.insert(s.with(e)).second) next.push_back(s.with(e));
        frontier = std::move(next);
    }
    return SetFamily(n, std::vector<ElementSet>(seen.begin(), seen.end()));
}

SetFamily downset_closure(const SetFamily& fam) {
    const int n = fam.ground();
    if (n <= kSosLimit) {
        auto dense = dense_of(fam);
        const std::size_t total = dense.size();
        for (int b = 0; b < n; ++b) {
            const std::size_t bit = std::size_t{1} << b;
            for (std::size_t mask = 0; mask < total; ++mask)
                if ((mask & bit) && dense[mask]) dense[mask ^ bit] = 1;
        }
        return from_dense(n, dense);
    }
    std::unordered_set<ElementSet> seen(fam.begin(), fam.end());
    std::vector<ElementSet> frontier(fam.begin(), fam.end());
    while (!frontier.empty()) {
        std::vector<ElementSet> next;
        for (ElementSet s : frontier)
            for (int e : s.elements())
                if (seen.insert(s.without(e)).second) next.push_back(s.without(e));
        frontier = std::move(next);
    }
    return SetFamily(n, std::vector<ElementSet>(seen.begin(), seen.end()));
}

SetFamily minimal_members(const SetFamily& fam) {
    const int n = fam.ground();
    if (n <= kSosLimit && fam.size() > 64) {
        // below[mask]: some member is a subset of mask
        auto below = dense_of(fam);
        const std::size_t total = below.size();
        for (int b = 0; b < n; ++b) {
            const std::size_t bit = std::size_t{1} << b;
            for (std::size_t mask = 0; mask < total; ++mask)
                if ((mask & bit) && below[mask ^ bit]) below[mask] = 1;
        }
        std::vector<ElementSet> out;
        for (ElementSet s : fam) {
            bool minimal = true;
            for (Mask rest = s.bits(); rest != 0; rest &= rest - 1) {
                const Mask low = rest & (~rest + 1);
                if (below[s.bits() ^ low]) {
                    minimal = false;
                    break;
                }
            }
            if (minimal) out.push_back(s);
        }
        return SetFamily(n, std::move(out));
    }
    std::vector<Mask> masks;
    for (ElementSet s : fam) masks.push_back(s.bits());
    std::vector<ElementSet> out;
    for (Mask m : minimal_masks(std::move(masks))) out.emplace_back(m);
    return SetFamily(n, std::move(out));
}

std::vector<std::vector<ElementSet>> enumerate_disjoint_tuples(const SetFamily& fam, int s, std::size_t limit) {
    if (s < 2) throw InvalidParams("tuple size must be at least 2");
    std::vector<std::vector<ElementSet>> out;
    const auto members = fam.members();
    std::vector<ElementSet> current;
    auto dfs = [&](auto&& self, std::size_t from, Mask used) -> void {
        if (out.size() >= limit) return;
        if (static_cast<int>(current.size()) == s) {
            out.push_back(current);
            return;
        }
        for (std::size_t i = from; i < members.size(); ++i) {
            if (members[i].bits() & used) continue;
            // the empty set is disjoint from everything, including a second copy of nothing
            current.push_back(members[i]);
            self(self, i + 1, used | members[i].bits());
            current.pop_back();
            if (out.size() >= limit) return;
        }
    };
    dfs(dfs, 0, 0);
    return out;
}

SetFamily read_family(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    std::vector<ElementSet> members;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const bool had_comment = hash != std::string::npos;
        std::string body = had_comment ? line.substr(0, hash) : line;
        const bool blank = body.find_first_not_of(" \t\r") == std::string::npos;
        if (n < 0) {
            if (blank) {
                if (had_comment) continue;
                throw ParseError(lineno, "expected header 'n=<int>'");
            }
            const auto eq = body.find('=');
            std::string key = body.substr(0, eq == std::string::npos ? 0 : eq);
            key.erase(std::remove_if(key.begin(), key.end(), [](char c) { return c == ' ' || c == '\t'; }), key.end());
            if (eq == std::string::npos || key != "n") throw ParseError(lineno, "expected header 'n=<int>'");
            n = parse_int(std::string_view(body).substr(eq + 1), lineno, "ground-set size");
            if (n < 1 || n > kMaxGround) throw ParseError(lineno, "ground-set size must be in [1, 30]");
            continue;
        }
        if (blank) {
            // a pure comment line is skipped; a truly empty line is the empty set
            if (!had_comment) members.emplace_back();
            continue;
        }
        Mask bits = 0;
        int previous = 0;
        std::string_view rest(body);
        while (true) {
            const auto comma = rest.find(',');
            const int e = parse_int(rest.substr(0, comma), lineno, "element");
            if (e < 1 || e > n) throw ParseError(lineno, "element " + std::to_string(e) + " outside [1," + std::to_string(n) + "]");
            if (e <= previous) throw ParseError(lineno, "elements must be strictly ascending");
            bits |= Mask{1} << (e - 1);
            previous = e;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        members.emplace_back(bits);
    }
    if (n < 0) throw ParseError(lineno == 0 ? 1 : lineno, "missing header 'n=<int>'");
    return SetFamily(n, std::move(members));
}

SetFamily read_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open family file '" + path + "'");
    return read_family(in);
}

void write_family(std::ostream& out, const SetFamily& fam) {
    std::vector<ElementSet> sorted(fam.begin(), fam.end());
    std::sort(sorted.begin(), sorted.end(), SizeThenMask{});
    out << "n=" << fam.ground() << '\n';
    for (ElementSet s : sorted) {
        bool first = true;
        for (int e : s.elements()) {
            if (!first) out << ',';
            out << e;
            first = false;
        }
        out << '\n';
    }
}

void write_family_file(const std::string& path, const SetFamily& fam) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write family file '" + path + "'");
    write_family(out, fam);
}

}  // namespace matchfree
