#pragma once

// Charge redistribution on one weighted configuration G(sigma) for a concrete
// up-set F: small sets pass their charge to missing larger sets, stage by
// stage, and every cap is checked exactly.

#include "matchfree/config.hpp"
#include "matchfree/family.hpp"
#include "matchfree/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace matchfree {

struct Transfer {
    int stage = 0;       // 1..5; s = 4 uses 4 for (i) and 5 for (ii)
    int x = 0;           // anchor of the x-family the charge moves in
    std::string from;    // e.g. "chain g=1 k=2..3" or "m-pool"
    ElementSet to;
    Rational amount;
};

class ChargeLedger {
public:
    ChargeLedger(const WeightedConfig& config, const SetFamily& fam);

    const WeightedConfig& config() const { return *config_; }
    const SetFamily& family() const { return *fam_; }

    Rational total(ElementSet set) const;
    const std::map<ElementSet, Rational>& totals() const { return total_; }
    Rational portion(int x, int group, int k) const;
    /// Sum of the (x, group, k) portions for k in [k_lo, k_hi].
    Rational portions(int x, int group, int k_lo, int k_hi) const;
    /// Removes those portions from the chain sets and returns their sum.
    Rational take_portions(int x, int group, int k_lo, int k_hi);

    /// Moves every m-set portion into the pool; returns the pooled amount.
    Rational pool_m_layer();
    Rational m_pool() const { return m_pool_; }
    void debit_pool(const Rational& amount) { m_pool_ -= amount; }

    void credit(int stage, int x, const std::string& from, ElementSet to, const Rational& amount);
    /// Charge `set` received from stages run in the x-family at x.
    Rational received(ElementSet set, int x) const;
    /// Moves charge between two large sets (Stage-5 overflow).
    void move(int stage, ElementSet from, ElementSet to, const Rational& amount);

    Rational grand_total() const;
    const std::vector<Transfer>& transfers() const { return transfers_; }

private:
    std::size_t index(int x, int group, int k) const;

    const WeightedConfig* config_;
    const SetFamily* fam_;
    std::map<ElementSet, Rational> total_;
    std::vector<Rational> portions_;
    std::map<std::pair<ElementSet, int>, Rational> received_;
    Rational m_pool_;
    bool pooled_ = false;
    std::vector<Transfer> transfers_;
};

struct StageLog {
    int stage = 0;
    std::string name;
    int transfers = 0;
    Rational moved;
    std::vector<std::string> notes;
};

/// One row of the caps table: value <= cap is required.
struct CapCheck {
    std::string name;
    Rational value;
    Rational cap;
    bool ok = true;
};

struct DischargeReport {
    int s = 0, m = 0, n = 0;
    Variant variant = Variant::Full;
    long long q = 0;
    std::vector<long long> z;  // z[j] = anchors whose x-family has j family m-sets
    std::vector<StageLog> stage_logs;
    std::vector<Transfer> transfers;
    std::vector<CapCheck> caps;
    std::vector<std::string> violations;
    /// Direct sum of w(F) over F in fam and G(sigma).
    Rational conclusion_lhs;
    Rational conclusion_rhs;
    /// Final ledger total; must equal conclusion_lhs.
    Rational ledger_total;
    Rational m_layer_charge;
    Rational m_layer_cap;
    /// "", "shared-1a" or "two-1b" when the q = m+1, z2 = 2 case is met.
    std::string special_case;
    bool type_1a_fallback = false;
    bool verdict = false;
};

/// Runs the stage pipeline for s = 3 or s = 4. Throws NotUpSet,
/// MatchingTooLarge, or StagePreconditionFailed.
DischargeReport run_discharge(const SetFamily& fam, const WeightedConfig& config);
DischargeReport run_discharge(const SetFamily& fam, const CyclicOrder& sigma, int s, int m,
                              Variant variant = Variant::Full);

/// Right-hand side s*m*C(n,m) + s*n*sum over the top weighted layers of C(n,k).
Rational conclusion_bound(int s, int m);

}  // namespace matchfree
