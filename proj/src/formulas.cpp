#include "matchfree/formulas.hpp"

#include "matchfree/errors.hpp"

namespace matchfree {

namespace {

Integer tail_sum(int n, int from) {
    Integer total = 0;
    for (int t = from; t <= n; ++t) total += binom(n, t);
    return total;
}

Params supported(int n, int s) {
    const Params p = Params::make(n, s);
    if (!p.residue)
        throw UnsupportedResidue("no closed form for n=" + std::to_string(n) + ", s=" + std::to_string(s) +
                                 " (n mod s must be s-1, 0 or s-2)");
    return p;
}

}  // namespace

ExtremalValue e_formula(int n, int s) {
    const Params p = supported(n, s);
    const int m = *p.m;
    ExtremalValue out{n, s, m, 0, *p.residue, {}};
    switch (*p.residue) {
        case ResidueClass::SmMinus1:
            out.value = tail_sum(n, m);
            break;
        case ResidueClass::Sm:
            // (s-1)/s * C(sm, m) == C(sm-1, m)
            out.value = binom(n - 1, m) + tail_sum(n, m + 1);
            break;
        case ResidueClass::SmPlusSMinus2:
            out.value = binom(n - 1, m - 1) + tail_sum(n, m + 1);
            if (s >= 5) out.note = "value for s >= 5 relies on an external result, not verified here";
            break;
    }
    return out;
}

SetFamily kleitman_family(int n, int s) {
    const Params p = supported(n, s);
    const int m = *p.m;
    if (*p.residue == ResidueClass::SmMinus1) return SetFamily::layers_from(n, m);
    if (*p.residue != ResidueClass::Sm)
        throw UnsupportedResidue("Kleitman's construction needs n = sm-1 or n = sm");
    const SetFamily upper = SetFamily::layers_from(n, m + 1);
    std::vector<ElementSet> members(upper.begin(), upper.end());
    const ElementSet prefix = ElementSet::full(n - 1);
    for (ElementSet k : SetFamily::layers_from(n, m).layer(m))
        if (k.subset_of(prefix)) members.push_back(k);
    return SetFamily(n, std::move(members));
}

SetFamily theorem_family(int n, int s) {
    if (s < 3) throw UnsupportedResidue("the theorem construction needs s >= 3");
    const Params p = Params::make(n, s);
    if (p.residue != ResidueClass::SmPlusSMinus2)
        throw UnsupportedResidue("the theorem construction needs n = sm+s-2");
    const int m = *p.m;
    const SetFamily upper = SetFamily::layers_from(n, m);
    std::vector<ElementSet> members;
    for (ElementSet l : upper)
        if (l.size() >= m + 1 || l.contains(1)) members.push_back(l);
    return SetFamily(n, std::move(members));
}

SetFamily extremal_construction(int n, int s) {
    const Params p = supported(n, s);
    if (*p.residue == ResidueClass::SmPlusSMinus2) return theorem_family(n, s);
    return kleitman_family(n, s);
}

}  // namespace matchfree
