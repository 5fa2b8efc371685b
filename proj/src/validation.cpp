#include "casec/validation.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "casec/cyber_domain.hpp"

namespace casec {

const std::vector<RuleInfo>& list_rules() {
    static const std::vector<RuleInfo> rules = {
        {"V01", Severity::Error,
         "Exactly one root claim: the declared root is a claim with no parent argument and "
         "no other non-side claim is detached."},
        {"V02", Severity::Error,
         "Every in-scope, non-assumption claim has exactly one substantiation path: one "
         "argument, or at least one piece of evidence, never both."},
        {"V03", Severity::Error, "Every decomposition argument has a side-claim."},
        {"V04", Severity::Error, "Every substitution argument has a side-claim."},
        {"V05", Severity::Note,
         "Assumptions (claims flagged as assumption with no evidence or argument) are "
         "surfaced."},
        {"V06", Severity::Error, "Unmitigated defeaters are reported."},
        {"V07", Severity::Error,
         "The claim/argument graph is acyclic and every node is reachable from a root "
         "claim."},
        {"V08", Severity::Error,
         "Evidence taxonomy facets are complete; a payload of the form results:<key> must "
         "name an ingested result set when results are supplied."},
        {"V09", Severity::Error,
         "Claims bound to a risk model specify actor, harm vector(s), target and threshold "
         "tier."},
        {"V10", Severity::Error,
         "A risk model's threshold tier lies strictly above its actor tier."},
        {"V11", Severity::Warning,
         "Node ids follow the naming convention O | C<n>.<m|x> | A<n>[.<m>] | E<n>.<m> | "
         "D<n>.<m>."},
        {"V12", Severity::Warning,
         "Out-of-scope claims carry no evidence and no argument (decomposing into at least "
         "one in-scope claim is the accepted framing pattern); out-of-scope side-claims are "
         "noted."},
    };
    return rules;
}

bool has_errors(const std::vector<RuleReport>& reports) {
    for (const auto& r : reports)
        if (r.severity == Severity::Error) return true;
    return false;
}

namespace {

Severity rule_severity(const std::string& code, const ValidationConfig& config) {
    Severity sev = Severity::Error;
    for (const auto& info : list_rules())
        if (code == info.code) sev = info.default_severity;
    if (code == "V05") sev = config.treat_assumptions_as;
    if (code == "V06" && config.allow_unmitigated_defeaters) sev = Severity::Warning;
    auto it = config.severity_overrides.find(code);
    if (it != config.severity_overrides.end()) sev = it->second;
    return sev;
}

struct Engine {
    const SafetyCase& c;
    const ValidationConfig& config;
    std::vector<RuleReport> reports;

    void report(const char* code, const NodeId& subject, std::string message,
                std::optional<Severity> severity = std::nullopt) {
        reports.push_back({code, severity.value_or(rule_severity(code, config)), subject,
                           std::move(message)});
    }
};

// Detached non-side claims; the declared root is the only legitimate one.
std::vector<const Claim*> apex_claims(const SafetyCase& c) {
    std::vector<const Claim*> out;
    for (const auto& cl : c.claims)
        if (!cl.is_side_claim && c.parent_arguments_of(cl.id).empty()) out.push_back(&cl);
    return out;
}

void rule_v01(Engine& e) {
    const Claim* root = e.c.find_claim(e.c.root);
    if (!root) {
        e.report("V01", e.c.root, "declared root does not resolve to a claim");
        return;
    }
    if (root->is_side_claim)
        e.report("V01", e.c.root, "declared root is a side-claim");
    if (!e.c.parent_arguments_of(e.c.root).empty())
        e.report("V01", e.c.root, "declared root is a child of an argument");
    for (const Claim* apex : apex_claims(e.c))
        if (!(apex->id == e.c.root))
            e.report("V01", apex->id,
                     "claim \"" + apex->id.value + "\" is detached from the root argument "
                     "structure (second apex)");
}

void rule_v02(Engine& e) {
    for (const auto& cl : e.c.claims) {
        if (cl.scope == Scope::OutOfScope || cl.is_assumption) continue;
        int arg_count = 0;
        for (const auto& a : e.c.arguments)
            if (a.parent == cl.id) ++arg_count;
        size_t ev_count = e.c.evidence_for(cl.id).size();
        if (arg_count > 1)
            e.report("V02", cl.id, "claim has more than one substantiating argument");
        if (arg_count >= 1 && ev_count >= 1)
            e.report("V02", cl.id,
                     "claim mixes an argument with direct evidence; model mixed support as a "
                     "decomposition");
        if (arg_count == 0 && ev_count == 0)
            e.report("V02", cl.id,
                     "in-scope claim has no argument, no evidence and is not an assumption");
    }
}

void rule_v03_v04(Engine& e) {
    for (const auto& a : e.c.arguments) {
        if (a.side) continue;
        if (a.kind == ArgumentKind::Decomposition)
            e.report("V03", a.id, "decomposition argument has no side-claim");
        else
            e.report("V04", a.id, "substitution argument has no side-claim");
    }
}

void rule_v05(Engine& e) {
    for (const auto& cl : e.c.claims) {
        if (!cl.is_assumption) continue;
        if (e.c.argument_of(cl.id) || !e.c.evidence_for(cl.id).empty()) continue;
        e.report("V05", cl.id, "claim rests on an assumption unsupported by evidence");
    }
}

void rule_v06(Engine& e) {
    for (const auto& d : e.c.defeaters)
        if (d.status == DefeaterStatus::Unmitigated)
            e.report("V06", d.id,
                     "unmitigated defeater targeting \"" + d.target.value + "\"");
}

void rule_v07(Engine& e) {
    CycleReport cyc = check_dag(e.c);
    if (!cyc.acyclic) {
        std::string path;
        for (size_t i = 0; i < cyc.witness.size(); ++i) {
            if (i) path += " -> ";
            path += cyc.witness[i].value;
        }
        e.report("V07", cyc.witness.front(), "cycle in claim/argument graph: " + path);
    }

    // Reachability from the apex set; extra apexes are V01 findings, their
    // subtrees are not additionally reported here.
    std::unordered_set<NodeId> visited;
    std::vector<NodeId> work;
    auto push = [&](const NodeId& id) {
        if (visited.insert(id).second) work.push_back(id);
    };
    if (e.c.find_claim(e.c.root)) push(e.c.root);
    for (const Claim* apex : apex_claims(e.c)) push(apex->id);
    while (!work.empty()) {
        NodeId cur = work.back();
        work.pop_back();
        for (const auto& a : e.c.arguments) {
            if (!(a.parent == cur)) continue;
            push(a.id);
            for (const auto& ch : a.children) push(ch);
            if (a.side) push(*a.side);
        }
        for (const Evidence* ev : e.c.evidence_for(cur)) push(ev->id);
        for (const Defeater* d : e.c.defeaters_on(cur)) push(d->id);
    }
    auto check = [&](const NodeId& id) {
        if (!visited.count(id))
            e.report("V07", id, "node \"" + id.value + "\" is not reachable from the root");
    };
    for (const auto& n : e.c.claims) check(n.id);
    for (const auto& n : e.c.arguments) check(n.id);
    for (const auto& n : e.c.evidence) check(n.id);
    for (const auto& n : e.c.defeaters) check(n.id);
}

void rule_v08(Engine& e, const std::set<std::string>* known_result_sets) {
    for (const auto& ev : e.c.evidence) {
        if (!ev.taxonomy)
            e.report("V08", ev.id, "evidence taxonomy facets are not set");
        if (known_result_sets && ev.payload && ev.payload->starts_with("results:")) {
            std::string key = ev.payload->substr(8);
            if (!known_result_sets->count(key))
                e.report("V08", ev.id,
                         "payload references unknown result set \"" + key + "\"");
        }
    }
}

void rule_v09_v10(Engine& e) {
    for (const auto& cl : e.c.claims) {
        if (!cl.risk_model) continue;
        RiskModelParse parsed = parse_risk_model(*cl.risk_model);
        if (!parsed.ok()) {
            std::string joined;
            for (const auto& msg : parsed.errors) {
                if (!joined.empty()) joined += "; ";
                joined += msg;
            }
            e.report("V09", cl.id, "risk model incomplete: " + joined);
            continue;
        }
        for (const auto& v : parsed.value->vectors)
            if (v.kind == HarmVector::Kind::Other && v.other_label.empty())
                e.report("V09", cl.id, "risk model has an unlabelled other() vector");
        if (tier_cmp(parsed.value->threshold_tier, parsed.value->actor) != Ordering::Greater)
            e.report("V10", cl.id,
                     "risk model threshold tier is not strictly above the actor tier");
    }
}

void rule_v11(Engine& e) {
    auto check = [&](const NodeId& id) {
        if (!id_conforms(id.value))
            e.report("V11", id, "id \"" + id.value + "\" departs from the naming convention");
    };
    for (const auto& n : e.c.claims) check(n.id);
    for (const auto& n : e.c.arguments) check(n.id);
    for (const auto& n : e.c.evidence) check(n.id);
    for (const auto& n : e.c.defeaters) check(n.id);
}

void rule_v12(Engine& e) {
    for (const auto& cl : e.c.claims) {
        if (cl.scope != Scope::OutOfScope) continue;
        if (!e.c.evidence_for(cl.id).empty())
            e.report("V12", cl.id, "out-of-scope claim carries evidence");
        for (const auto& a : e.c.arguments) {
            if (!(a.parent == cl.id)) continue;
            bool has_in_scope_child = false;
            for (const auto& ch : a.children) {
                const Claim* child = e.c.find_claim(ch);
                if (child && child->scope == Scope::InScope) has_in_scope_child = true;
            }
            if (!has_in_scope_child)
                e.report("V12", cl.id,
                         "out-of-scope claim carries an argument with no in-scope children");
        }
        if (cl.is_side_claim)
            e.report("V12", cl.id, "side-claim is marked out-of-scope", Severity::Note);
    }
}

}  // namespace

std::vector<RuleReport> validate(const SafetyCase& c, const ValidationConfig& config,
                                 const std::set<std::string>* known_result_sets) {
    Engine e{c, config, {}};
    rule_v01(e);
    rule_v02(e);
    rule_v03_v04(e);
    rule_v05(e);
    rule_v06(e);
    rule_v07(e);
    rule_v08(e, known_result_sets);
    rule_v09_v10(e);
    rule_v11(e);
    rule_v12(e);
    std::sort(e.reports.begin(), e.reports.end(), [](const RuleReport& a, const RuleReport& b) {
        if (a.rule != b.rule) return a.rule < b.rule;
        if (!(a.subject == b.subject)) return canonical_id_less(a.subject, b.subject);
        return a.message < b.message;
    });
    return e.reports;
}

ConfigParseResult parse_validation_config(const SourceDocument& doc) {
    ConfigParseResult result;
    std::istringstream in(doc.text);
    std::string raw;
    int line_no = 0;
    auto parse_severity = [](const std::string& tok) -> std::optional<Severity> {
        if (tok == "error") return Severity::Error;
        if (tok == "warning") return Severity::Warning;
        if (tok == "note") return Severity::Note;
        return std::nullopt;
    };
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::istringstream ls(raw);
        std::string key, eq, value;
        if (!(ls >> key) || key[0] == '#') continue;
        if (!(ls >> eq >> value) || eq != "=") {
            result.diagnostics.push_back(
                {Severity::Error, line_no, 1, "P003", "expected KEY = VALUE"});
            continue;
        }
        if (key == "treat_assumptions_as") {
            auto sev = parse_severity(value);
            if (sev && *sev != Severity::Error)
                result.value.treat_assumptions_as = *sev;
            else
                result.diagnostics.push_back({Severity::Error, line_no, 1, "P003",
                                              "treat_assumptions_as must be note|warning"});
        } else if (key == "allow_unmitigated_defeaters") {
            if (value == "true")
                result.value.allow_unmitigated_defeaters = true;
            else if (value == "false")
                result.value.allow_unmitigated_defeaters = false;
            else
                result.diagnostics.push_back({Severity::Error, line_no, 1, "P003",
                                              "allow_unmitigated_defeaters must be "
                                              "true|false"});
        } else if (key.starts_with("rule.")) {
            std::string code = key.substr(5);
            bool known = false;
            for (const auto& info : list_rules())
                if (code == info.code) known = true;
            auto sev = parse_severity(value);
            if (!known)
                result.diagnostics.push_back(
                    {Severity::Error, line_no, 1, "P003", "unknown rule code " + code});
            else if (!sev)
                result.diagnostics.push_back({Severity::Error, line_no, 1, "P003",
                                              "severity must be error|warning|note"});
            else
                result.value.severity_overrides[code] = *sev;
        } else {
            result.diagnostics.push_back(
                {Severity::Error, line_no, 1, "P003", "unknown config key \"" + key + "\""});
        }
    }
    return result;
}

}  // namespace casec
