#pragma once

// Weighted cyclic configurations G(sigma) for s = 3 (n = 3m+1) and s = 4
// (n = 4m+2). Sets are described by "labels": integers read modulo n, where
// label L stands for the element at cyclic position L of sigma. With sigma
// the identity, label L is simply the element L mod n (in 1..n).

#include "matchfree/family.hpp"
#include "matchfree/rational.hpp"

#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace matchfree {

/// A permutation of [n] read cyclically.
class CyclicOrder {
public:
    CyclicOrder() = default;
    static CyclicOrder identity(int n);
    /// order[p] is the element at position p+1; must be a permutation of 1..n.
    static CyclicOrder from_sequence(std::vector<int> order);

    int n() const { return static_cast<int>(order_.size()); }
    /// Element carried by a label, label taken modulo n (label n == label 0).
    int element(long label) const;
    /// Position (1..n) of an element.
    int position(int element) const { return position_[static_cast<std::size_t>(element - 1)]; }
    std::span<const int> sequence() const { return order_; }
    bool is_identity() const;
    ElementSet set_of(std::span<const long> labels) const;

private:
    std::vector<int> order_;
    std::vector<int> position_;
};

enum class Role { Chain, MSet, Central, Lateral, Top };
std::string to_string(Role role);

enum class Variant { Full, CentralOnly };
std::string to_string(Variant variant);

/// A set of an x-family together with its place in it.
struct LabeledSet {
    ElementSet set;
    int x = 0;          // anchor label, 1..n
    int group = 0;      // 0..s-1
    int size_class = 0; // nominal size k
    Role role = Role::Chain;
    std::string tag;    // role parameters, e.g. "j=1" or "x'=x-1,j=2"
    Rational weight;
};

/// Exact per-role weights for one (s, m) and variant.
struct WeightScheme {
    int s = 0;
    int m = 0;
    int n = 0;
    Variant variant = Variant::Full;
    Rational alpha;        // s = 3 only
    Rational alpha_prime;  // s = 3 only
    Rational lateral_m1, central_m1, lateral_m2, central_m2, top;

    static WeightScheme make(int s, int m, Variant variant = Variant::Full);

    /// Weight of a chain or m-set of size k (k <= m).
    Rational chain(int k) const { return binom_q(n, k); }
    int top_size() const { return s == 3 ? m + 3 : m + 5; }
    /// Layers carrying weight in every group: 1..m+3 for s = 3, 1..m+2 and m+5 for s = 4.
    std::vector<int> weighted_layers() const;
    /// Layers whose weights the variant changes.
    std::vector<int> variant_layers() const;
};

/// Where s anchor-dependent sets live for a fixed (s, m, sigma). All arguments
/// are labels / group indices; results are element sets.
class XFamilyGeometry {
public:
    XFamilyGeometry(int s, int m, CyclicOrder sigma);

    int s() const { return s_; }
    int m() const { return m_; }
    int n() const { return n_; }
    const CyclicOrder& sigma() const { return sigma_; }

    /// Last k labels of group i's m-arc; k = m is the m-set, k = 0 the empty set.
    ElementSet chain(int x, int group, int k) const;
    ElementSet mset(int x, int group) const { return chain(x, group, m_); }

    // s = 3
    ElementSet central_m1(int x, int group) const;                // H_i u {x}
    ElementSet lateral_m1(int x, int group, int other) const;     // H_i u {first of group other}
    ElementSet central_m2(int x, int group, int other) const;     // H_i u {first of other, x}
    ElementSet lateral_m2(int x, int group, int other) const;     // H_i u {2nd, 3rd of other}
    ElementSet top3(int x, int group) const;                      // H_i u {x, x+1, m+x+1, 2m+x+1}

    // s = 4; `minus_one` selects x-1 instead of x as the added anchor.
    ElementSet central_m1_4(int x, int group, bool minus_one) const;
    ElementSet lateral_m2_4(int x, int group, int other, bool minus_one) const;
    ElementSet central_m2_4(int x, int group) const;              // H_i u {x-1, x}
    ElementSet top4(int x, int group) const;

    /// lateral (m+1)-set, the same shape for s = 3 and s = 4.
    ElementSet lateral(int x, int group, int other) const { return lateral_m1(x, group, other); }

private:
    long first_label(int x, int group) const { return static_cast<long>(group) * m_ + x + 1; }
    ElementSet labels(std::initializer_list<long> extra, int x, int group) const;

    int s_, m_, n_;
    CyclicOrder sigma_;
};

/// Every role of the x-family anchored at x, with its weight under the scheme
/// (zero-weight roles of the central-only variant included).
std::vector<LabeledSet> build_xfamily(const XFamilyGeometry& geometry, int x, const WeightScheme& scheme);

class WeightedConfig {
public:
    struct Entry {
        Rational weight;
        std::vector<LabeledSet> provenance;
        int central_count() const;
        int lateral_count() const;
    };

    WeightedConfig(XFamilyGeometry geometry, WeightScheme scheme);

    const XFamilyGeometry& geometry() const { return geometry_; }
    const WeightScheme& scheme() const { return scheme_; }
    int n() const { return geometry_.n(); }
    int s() const { return geometry_.s(); }
    int m() const { return geometry_.m(); }
    const CyclicOrder& sigma() const { return geometry_.sigma(); }

    const std::map<ElementSet, Entry>& entries() const { return entries_; }
    const Entry* find(ElementSet set) const;
    /// Accumulated weight; zero outside G(sigma).
    Rational weight(ElementSet set) const;
    /// Weight the set receives from the x-family anchored at x alone.
    Rational contribution(ElementSet set, int x) const;
    /// Sets of G(sigma) as a family.
    SetFamily support() const;

private:
    XFamilyGeometry geometry_;
    WeightScheme scheme_;
    std::map<ElementSet, Entry> entries_;
};

WeightedConfig build_config(int s, int m, const CyclicOrder& sigma, Variant variant = Variant::Full);

struct LayerSumRow {
    int layer = 0;
    Rational sum;
    Rational expected;
    enum class Status { Ok, Mismatch, VariantExempt } status = Status::Ok;
};

struct LayerSumReport {
    std::vector<LayerSumRow> rows;
    bool ok() const;
};

/// Per weighted layer j: the weights of j-sets of G(sigma) sum to s*n*C(n,j);
/// every other layer carries no weight.
LayerSumReport verify_layer_sums(const WeightedConfig& config);

/// Per-group identity: in every group of every x-family the role weights of
/// k-sets sum to C(n,k) for each weighted k. Returns the offending
/// (x, group, k) triples.
std::vector<std::string> verify_group_sums(const WeightedConfig& config);

struct DisjointnessViolation {
    std::string relation;
    int x = 0;
    std::string roles;
};

struct CatalogReport {
    long long checks = 0;
    std::vector<DisjointnessViolation> violations;
    std::vector<std::string> notes;
    bool ok() const { return violations.empty(); }
};

/// Checks every disjoint tuple the discharging stages rely on, for all anchors
/// and all assignments of groups to roles.
CatalogReport verify_disjointness_catalog(int s, int m, const CyclicOrder& sigma);

/// One rotation class of weighted sets.
struct WeightType {
    int size = 0;
    /// Canonical representative: the lexicographically least rotation of the
    /// position pattern, written as a 0/1 string starting at position 1.
    std::string pattern;
    Rational weight;
    /// weight / C(n, size)
    Rational normalized;
    int central = 0;
    int lateral = 0;
    int count = 0;  // sets of G(sigma) in this class
};

/// All types of weighted sets modulo rotation, sorted by (size, pattern).
std::vector<WeightType> weight_type_catalog(const WeightedConfig& config);

/// Parses a permutation file: one line of comma-separated 1..n.
CyclicOrder read_cyclic_order_file(const std::string& path, int n);

}  // namespace matchfree
