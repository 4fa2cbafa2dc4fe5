#include "matchfree/json_io.hpp"

#include "matchfree/errors.hpp"

#include <set>

namespace matchfree {

namespace {

Json q(const Rational& r) { return to_string(r); }

Json tagged(const char* schema) {
    Json j;
    j["schema"] = std::string("matchfree/") + schema + "/1";
    return j;
}

std::string status_name(LayerSumRow::Status s) {
    switch (s) {
        case LayerSumRow::Status::Ok: return "ok";
        case LayerSumRow::Status::Mismatch: return "mismatch";
        case LayerSumRow::Status::VariantExempt: return "variant-exempt";
    }
    return "?";
}

// Fields holding rationals, checked by validate_report.
const std::set<std::string> kRationalKeys = {"weight",        "sum",          "expected",    "amount",
                                             "moved",         "value",        "cap",         "conclusion_lhs",
                                             "conclusion_rhs", "ledger_total", "m_layer_charge", "m_layer_cap",
                                             "margin",        "normalized",   "average",     "average_total",
                                             "expected_total"};

void check_rationals(const Json& j) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (kRationalKeys.count(it.key()) && it.value().is_string()) parse_rational(it.value().get<std::string>());
            check_rationals(it.value());
        }
    } else if (j.is_array()) {
        for (const Json& e : j) check_rationals(e);
    }
}

}  // namespace

Json set_json(ElementSet set) {
    Json a = Json::array();
    for (int e : set.elements()) a.push_back(e);
    return a;
}

ElementSet set_from_json(const Json& j) {
    ElementSet out;
    for (const Json& e : j) {
        const int v = e.get<int>();
        if (v < 1 || v > kMaxGround) throw ParseError(0, "element out of range in JSON set: " + std::to_string(v));
        out = out.with(v);
    }
    return out;
}

Json family_json(const SetFamily& fam) {
    Json j;
    j["n"] = fam.ground();
    Json sets = Json::array();
    for (ElementSet s : fam) sets.push_back(set_json(s));
    j["sets"] = std::move(sets);
    return j;
}

SetFamily family_from_json(const Json& j) {
    std::vector<ElementSet> members;
    for (const Json& s : j.at("sets")) members.push_back(set_from_json(s));
    return SetFamily(j.at("n").get<int>(), std::move(members));
}

Json to_json(const ExtremalValue& v) {
    Json j = tagged("formula");
    j["n"] = v.n;
    j["s"] = v.s;
    j["m"] = v.m;
    j["residue_class"] = to_string(v.residue);
    j["value"] = v.value.get_str();
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

Json to_json(const FamilyReport& r) {
    Json j = tagged("check");
    j["n"] = r.n;
    j["s"] = r.s;
    j["size"] = r.size;
    j["nu"] = r.nu;
    j["contains_empty"] = r.contains_empty;
    j["is_upset"] = r.is_upset;
    j["matches_formula"] = r.matches_formula ? Json(*r.matches_formula) : Json(nullptr);
    j["formula_value"] = r.formula_value ? Json(*r.formula_value) : Json(nullptr);
    return j;
}

Json to_json(const SolveResult& r, bool include_witness) {
    Json j = tagged("solve");
    j["n"] = r.n;
    j["s"] = r.s;
    j["value"] = std::to_string(r.value);
    j["upper_bound"] = r.upper_bound;
    j["optimal"] = r.optimal;
    j["nodes_explored"] = r.nodes_explored;
    j["elapsed_seconds"] = r.elapsed.count();
    if (include_witness) j["witness"] = family_json(r.witness);
    return j;
}

Json to_json(const WeightedConfig& config) {
    Json j = tagged("config");
    j["s"] = config.s();
    j["m"] = config.m();
    j["n"] = config.n();
    j["variant"] = to_string(config.scheme().variant);
    Json sigma = Json::array();
    for (int e : config.sigma().sequence()) sigma.push_back(e);
    j["sigma"] = std::move(sigma);
    Json entries = Json::array();
    for (const auto& [set, entry] : config.entries()) {
        Json e;
        e["set"] = set_json(set);
        e["weight"] = q(entry.weight);
        Json prov = Json::array();
        for (const LabeledSet& l : entry.provenance) {
            Json p;
            p["x"] = l.x;
            p["group"] = l.group;
            p["role"] = to_string(l.role);
            p["k"] = l.size_class;
            p["tag"] = l.tag;
            p["weight"] = q(l.weight);
            prov.push_back(std::move(p));
        }
        e["provenance"] = std::move(prov);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

Json to_json(const LayerSumReport& r) {
    Json j = tagged("layer-sums");
    j["ok"] = r.ok();
    Json rows = Json::array();
    for (const LayerSumRow& row : r.rows)
        rows.push_back({{"layer", row.layer}, {"sum", q(row.sum)}, {"expected", q(row.expected)},
                        {"status", status_name(row.status)}});
    j["rows"] = std::move(rows);
    return j;
}

Json to_json(const CatalogReport& r) {
    Json j = tagged("catalog");
    j["checks"] = r.checks;
    j["ok"] = r.ok();
    Json v = Json::array();
    for (const DisjointnessViolation& d : r.violations)
        v.push_back({{"relation", d.relation}, {"x", d.x}, {"roles", d.roles}});
    j["violations"] = std::move(v);
    j["notes"] = r.notes;
    return j;
}

Json to_json(const std::vector<WeightType>& types) {
    Json j = tagged("weight-types");
    Json rows = Json::array();
    for (const WeightType& t : types)
        rows.push_back({{"size", t.size},
                        {"pattern", t.pattern},
                        {"weight", q(t.weight)},
                        {"normalized", q(t.normalized)},
                        {"central", t.central},
                        {"lateral", t.lateral},
                        {"count", t.count}});
    j["types"] = std::move(rows);
    return j;
}

Json to_json(const DischargeReport& r) {
    Json j = tagged("discharge");
    j["s"] = r.s;
    j["m"] = r.m;
    j["n"] = r.n;
    j["variant"] = to_string(r.variant);
    j["q"] = r.q;
    j["z"] = r.z;
    Json logs = Json::array();
    for (const StageLog& l : r.stage_logs)
        logs.push_back({{"stage", l.stage},
                        {"name", l.name},
                        {"transfers", l.transfers},
                        {"moved", q(l.moved)},
                        {"notes", l.notes}});
    j["stage_logs"] = std::move(logs);
    Json caps = Json::array();
    for (const CapCheck& c : r.caps)
        caps.push_back({{"name", c.name}, {"value", q(c.value)}, {"cap", q(c.cap)}, {"ok", c.ok}});
    j["caps"] = std::move(caps);
    Json transfers = Json::array();
    for (const Transfer& t : r.transfers)
        transfers.push_back(
            {{"stage", t.stage}, {"x", t.x}, {"from", t.from}, {"to", set_json(t.to)}, {"amount", q(t.amount)}});
    j["transfers"] = std::move(transfers);
    j["violations"] = r.violations;
    j["special_case"] = r.special_case;
    j["type_1a_fallback"] = r.type_1a_fallback;
    j["m_layer_charge"] = q(r.m_layer_charge);
    j["m_layer_cap"] = q(r.m_layer_cap);
    j["ledger_total"] = q(r.ledger_total);
    j["conclusion_lhs"] = q(r.conclusion_lhs);
    j["conclusion_rhs"] = q(r.conclusion_rhs);
    j["verdict"] = r.verdict;
    return j;
}

Json to_json(const std::vector<InequalityRecord>& records) {
    Json j = tagged("inequalities");
    Json rows = Json::array();
    for (const InequalityRecord& r : records)
        rows.push_back({{"id", r.id},
                        {"s", r.s},
                        {"m", r.m},
                        {"k", r.k < 0 ? Json(nullptr) : Json(r.k)},
                        {"holds", r.holds},
                        {"vacuous", r.vacuous},
                        {"in_range", r.in_range},
                        {"expected_fail", r.expected_fail},
                        {"equality", r.equality},
                        {"margin", q(r.margin)}});
    j["records"] = std::move(rows);
    return j;
}

Json to_json(const AveragingReport& r) {
    Json j = tagged("average");
    j["n"] = r.n;
    j["s"] = r.s;
    j["m"] = r.m;
    j["variant"] = to_string(r.variant);
    j["permutations"] = r.permutations;
    Json layers = Json::array();
    for (const AveragingLayer& l : r.layers)
        layers.push_back({{"layer", l.layer}, {"average", q(l.average)}, {"expected", q(l.expected)}});
    j["layers"] = std::move(layers);
    j["average_total"] = q(r.average_total);
    j["expected_total"] = q(r.expected_total);
    j["holds"] = r.holds;
    return j;
}

std::string validate_report(const Json& j) {
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        throw ParseError(0, "report has no schema tag");
    const std::string schema = j["schema"].get<std::string>();
    if (schema.rfind("matchfree/", 0) != 0) throw ParseError(0, "unknown schema " + schema);
    check_rationals(j);
    return schema;
}

}  // namespace matchfree
