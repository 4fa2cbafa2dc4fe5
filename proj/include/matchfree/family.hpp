#pragma once

#include "matchfree/element_set.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace matchfree {

/// The residue classes with a known closed form for e(n, s).
enum class ResidueClass { SmMinus1, Sm, SmPlusSMinus2 };

std::string to_string(ResidueClass rc);

/// Ground-set size n, forbidden matching size s, and the derived m when n
/// falls in one of the supported residue classes.
struct Params {
    int n = 0;
    int s = 0;
    std::optional<int> m;
    std::optional<ResidueClass> residue;

    /// Validates 1 <= n <= 30, s >= 2 and derives (m, residue) if possible.
    static Params make(int n, int s);
    /// Like make, but requires n = s*m + s - 2 for the given m (the configuration setting).
    static Params configuration(int s, int m);
};

/// A deduplicated collection of subsets of [n], kept sorted by bitmask.
class SetFamily {
public:
    SetFamily() = default;
    explicit SetFamily(int n);
    SetFamily(int n, std::vector<ElementSet> members);

    static SetFamily all_sets(int n);
    /// All K with |K| >= k.
    static SetFamily layers_from(int n, int k);
    /// All sets containing `element`.
    static SetFamily star(int n, int element);

    int ground() const { return n_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(ElementSet set) const;
    std::span<const ElementSet> members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    /// Members of size k, ascending bitmask.
    std::vector<ElementSet> layer(int k) const;
    std::size_t layer_count(int k) const;
    bool is_upset() const;

    SetFamily with(std::span<const ElementSet> extra) const;
    SetFamily without(std::span<const ElementSet> removed) const;
    /// Image under the element relabeling e -> perm[e-1] (perm is 1-based, size n).
    SetFamily relabeled(std::span<const int> perm) const;

    friend bool operator==(const SetFamily& a, const SetFamily& b) {
        return a.n_ == b.n_ && a.members_ == b.members_;
    }

private:
    void build_index();

    int n_ = 0;
    std::vector<ElementSet> members_;
    std::vector<bool> dense_;  // membership bitmap, only when n <= kDenseLimit
    static constexpr int kDenseLimit = 20;
};

/// min(nu(fam), cap) where nu is the maximum number of pairwise disjoint
/// members. Throws EmptySetPresent if the empty set is a member.
int matching_number(const SetFamily& fam, int cap);

/// Maximum number of pairwise disjoint masks among `sets` avoiding `blocked`,
/// stopping at cap. The sets need not be an antichain.
int packing_number(std::span<const ElementSet> sets, ElementSet blocked, int cap);

/// Smallest up-set containing fam.
SetFamily upset_closure(const SetFamily& fam);

/// Smallest down-set containing fam.
SetFamily downset_closure(const SetFamily& fam);

/// Inclusion-minimal members.
SetFamily minimal_members(const SetFamily& fam);

/// Unordered s-tuples of pairwise disjoint distinct members, lexicographic by
/// bitmask, at most `limit` of them.
std::vector<std::vector<ElementSet>> enumerate_disjoint_tuples(const SetFamily& fam, int s, std::size_t limit);

// Family text format: "n=<int>" header, one set per line as ascending
// comma-separated elements, an empty line for the empty set, '#' comments.
SetFamily read_family(std::istream& in);
SetFamily read_family_file(const std::string& path);
void write_family(std::ostream& out, const SetFamily& fam);
void write_family_file(const std::string& path, const SetFamily& fam);

}  // namespace matchfree
