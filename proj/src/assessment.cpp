#include "casec/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace casec {

const char* to_string(BinaryStatus s) {
    switch (s) {
        case BinaryStatus::Unsubstantiated: return "unsubstantiated";
        case BinaryStatus::Undetermined: return "undetermined";
        case BinaryStatus::Assumed: return "assumed";
        case BinaryStatus::Substantiated: return "substantiated";
        default: return "out-of-scope";
    }
}

namespace {

// Assumed passes aggregation as if substantiated; the load counter keeps it
// honest.
BinaryStatus effective(BinaryStatus s) {
    return s == BinaryStatus::Assumed ? BinaryStatus::Substantiated : s;
}

BinaryStatus min_status(BinaryStatus a, BinaryStatus b) {
    return int(a) <= int(b) ? a : b;
}

double unmitigated_discount(const Defeater& d) {
    return 1.0 - d.strength * (1.0 - d.mitigation_effectiveness);
}

struct EngineBase {
    const SafetyCase& c;
    Assessment out;
    std::vector<std::string> errors;

    // Claims evaluated iteratively: a worklist admits a claim once every
    // in-scope member of its argument is done. Validation guarantees
    // acyclicity, so this terminates with all claims settled.
    template <typename EvalFn>
    void run(EvalFn&& eval) {
        std::unordered_set<NodeId> done;
        size_t remaining = c.claims.size();
        while (remaining > 0) {
            bool progressed = false;
            for (const auto& cl : c.claims) {
                if (done.count(cl.id)) continue;
                const Argument* a = c.argument_of(cl.id);
                bool ready = true;
                if (a && cl.scope == Scope::InScope && !cl.is_assumption) {
                    for (const auto& ch : a->children)
                        if (!done.count(ch)) ready = false;
                    if (a->side && !done.count(*a->side)) ready = false;
                }
                if (!ready) continue;
                eval(cl, a);
                done.insert(cl.id);
                --remaining;
                progressed = true;
            }
            if (!progressed) {
                errors.push_back("internal: claim dependencies did not settle");
                return;
            }
        }
    }

    std::vector<const Defeater*> unmitigated_on(const NodeId& id) const {
        std::vector<const Defeater*> out_list;
        for (const Defeater* d : c.defeaters_on(id))
            if (d->status == DefeaterStatus::Unmitigated) out_list.push_back(d);
        return out_list;
    }

    void note_mitigated(TraceEntry& t, const NodeId& id) const {
        for (const Defeater* d : c.defeaters_on(id))
            if (d->status != DefeaterStatus::Unmitigated)
                t.inputs.push_back({d->id, "defeater", to_string(d->status), std::nullopt,
                                    std::nullopt});
    }
};

bool validation_blocks(const SafetyCase& c, const ValidationConfig& config,
                       std::vector<std::string>& errors) {
    auto reports = validate(c, config);
    bool blocked = false;
    for (const auto& r : reports) {
        if (r.severity != Severity::Error) continue;
        errors.push_back("validation " + r.rule + " on " + r.subject.value + ": " + r.message);
        blocked = true;
    }
    return blocked;
}

// In-scope claims an out-of-scope root delegates its verdict to.
std::vector<NodeId> in_scope_fringe(const SafetyCase& c, const NodeId& root) {
    std::vector<NodeId> fringe;
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> work{root};
    while (!work.empty()) {
        NodeId cur = work.back();
        work.pop_back();
        if (!seen.insert(cur).second) continue;
        const Claim* cl = c.find_claim(cur);
        if (!cl) continue;
        if (cl->scope == Scope::InScope) {
            fringe.push_back(cur);
            continue;
        }
        for (const auto& a : c.arguments) {
            if (!(a.parent == cur)) continue;
            for (const auto& ch : a.children) work.push_back(ch);
            if (a.side) work.push_back(*a.side);
        }
    }
    std::sort(fringe.begin(), fringe.end(), CanonicalIdLess{});
    return fringe;
}

}  // namespace

AssessResult assess_binary(const SafetyCase& c, const ValidationConfig& config) {
    AssessResult result;
    if (validation_blocks(c, config, result.errors)) return result;

    EngineBase eng{c, {}, {}};
    eng.out.mode = Assessment::Mode::Binary;

    eng.run([&](const Claim& cl, const Argument* a) {
        TraceEntry t;
        t.node = cl.id;
        BinaryStatus status;
        if (cl.scope == Scope::OutOfScope) {
            t.rule = "out-of-scope";
            status = BinaryStatus::OutOfScope;
        } else if (cl.is_assumption) {
            t.rule = "assumption";
            status = BinaryStatus::Assumed;
            t.assumption_load = 1;
        } else if (a) {
            t.rule = a->kind == ArgumentKind::Decomposition ? "decomposition" : "substitution";
            std::vector<NodeId> members = a->children;
            if (a->side) members.push_back(*a->side);
            status = BinaryStatus::Substantiated;
            bool any_member = false;
            for (const auto& m : members) {
                BinaryStatus ms = eng.out.statuses.at(m);
                const char* role = (a->side && *a->side == m) ? "side" : "child";
                if (ms == BinaryStatus::OutOfScope) {
                    t.inputs.push_back({m, role, "excluded", ms, std::nullopt});
                    continue;
                }
                any_member = true;
                t.inputs.push_back({m, role, "", ms, std::nullopt});
                status = min_status(status, effective(ms));
                t.assumption_load += eng.out.traces.at(m).assumption_load;
            }
            if (!any_member) status = BinaryStatus::Undetermined;
            // A challenge to the argument is a challenge to what it concludes.
            for (const Defeater* d : eng.unmitigated_on(a->id)) {
                t.inputs.push_back({d->id, "defeater-cap", "unmitigated", std::nullopt,
                                    std::nullopt});
                status = min_status(status, BinaryStatus::Undetermined);
            }
            eng.note_mitigated(t, a->id);
        } else {
            t.rule = "evidence";
            int supports = 0, refutes = 0;
            for (const Evidence* ev : c.evidence_for(cl.id)) {
                EvidenceVerdict verdict = ev->verdict;
                std::string note = to_string(verdict);
                if (!eng.unmitigated_on(ev->id).empty() &&
                    verdict != EvidenceVerdict::Inconclusive) {
                    verdict = EvidenceVerdict::Inconclusive;
                    note = std::string("capped:") + to_string(verdict);
                }
                if (verdict == EvidenceVerdict::Supports) ++supports;
                if (verdict == EvidenceVerdict::Refutes) ++refutes;
                t.inputs.push_back({ev->id, "evidence", note, std::nullopt, std::nullopt});
            }
            status = refutes > 0    ? BinaryStatus::Unsubstantiated
                     : supports > 0 ? BinaryStatus::Substantiated
                                    : BinaryStatus::Undetermined;
        }
        if (status != BinaryStatus::OutOfScope) {
            for (const Defeater* d : eng.unmitigated_on(cl.id)) {
                t.inputs.push_back({d->id, "defeater-cap", "unmitigated", std::nullopt,
                                    std::nullopt});
                status = min_status(status, BinaryStatus::Undetermined);
            }
            eng.note_mitigated(t, cl.id);
        }
        t.status = status;
        eng.out.statuses[cl.id] = status;
        eng.out.traces[cl.id] = std::move(t);
    });
    if (!eng.errors.empty()) {
        result.errors = eng.errors;
        return result;
    }

    BinaryStatus root_status = eng.out.statuses.at(c.root);
    int root_load = eng.out.traces.at(c.root).assumption_load;
    if (root_status == BinaryStatus::OutOfScope) {
        auto fringe = in_scope_fringe(c, c.root);
        if (fringe.empty()) {
            root_status = BinaryStatus::OutOfScope;
        } else {
            root_status = BinaryStatus::Substantiated;
            root_load = 0;
            for (const auto& f : fringe) {
                root_status = min_status(root_status, effective(eng.out.statuses.at(f)));
                root_load += eng.out.traces.at(f).assumption_load;
            }
            eng.out.warnings.push_back(
                "root is out-of-scope; verdict taken over its in-scope fringe");
        }
    }
    eng.out.root_status = root_status;
    eng.out.root_assumption_load = root_load;
    result.value = std::move(eng.out);
    return result;
}

AssessResult assess_confidence(const SafetyCase& c, const ConfidenceAssignment& assignment,
                               const ValidationConfig& config) {
    AssessResult result;
    if (!(assignment.assumed_confidence >= 0.0 && assignment.assumed_confidence <= 1.0)) {
        result.errors.push_back("assumed_confidence outside [0,1]");
        return result;
    }
    for (const auto& [id, v] : assignment.overrides)
        if (!(v >= 0.0 && v <= 1.0))
            result.errors.push_back("override for " + id.value + " outside [0,1]");
    if (!result.errors.empty()) return result;
    if (validation_blocks(c, config, result.errors)) return result;

    EngineBase eng{c, {}, {}};
    eng.out.mode = Assessment::Mode::Confidence;
    int assumptions_used = 0;

    auto evidence_confidence = [&](const Evidence& ev) -> std::optional<double> {
        auto it = assignment.overrides.find(ev.id);
        if (it != assignment.overrides.end()) return it->second;
        return ev.verdict_confidence;
    };

    eng.run([&](const Claim& cl, const Argument* a) {
        TraceEntry t;
        t.node = cl.id;
        if (cl.scope == Scope::OutOfScope) {
            t.rule = "out-of-scope";
            eng.out.statuses[cl.id] = BinaryStatus::OutOfScope;
            eng.out.traces[cl.id] = std::move(t);
            return;
        }
        double value = 1.0;
        bool have_value = false;
        auto leaf_override = assignment.overrides.find(cl.id);
        if (cl.is_assumption) {
            t.rule = "assumption";
            t.assumption_load = 1;
            // override > declared leaf confidence > assumed default
            if (leaf_override != assignment.overrides.end()) {
                value = leaf_override->second;
            } else if (cl.leaf_confidence) {
                value = *cl.leaf_confidence;
            } else {
                value = assignment.assumed_confidence;
                ++assumptions_used;
            }
            t.inputs.push_back({cl.id, "assumed", "", std::nullopt, value});
            have_value = true;
        } else if (a) {
            t.rule = a->kind == ArgumentKind::Decomposition ? "decomposition" : "substitution";
            std::vector<NodeId> members = a->children;
            if (a->side) members.push_back(*a->side);
            value = 1.0;
            bool any_member = false;
            for (const auto& m : members) {
                const char* role = (a->side && *a->side == m) ? "side" : "child";
                auto conf_it = eng.out.confidences.find(m);
                if (conf_it == eng.out.confidences.end()) {
                    t.inputs.push_back({m, role, "excluded", std::nullopt, std::nullopt});
                    continue;  // out-of-scope member
                }
                any_member = true;
                t.inputs.push_back({m, role, "", std::nullopt, conf_it->second});
                value *= conf_it->second;
                t.assumption_load += eng.out.traces.at(m).assumption_load;
            }
            if (!any_member) {
                // Nothing in scope substantiates the claim; no number is
                // derivable (binary mode calls this undetermined).
                eng.errors.push_back("claim " + cl.id.value +
                                     " has an argument with no in-scope members");
                eng.out.confidences[cl.id] = 0.0;
                eng.out.traces[cl.id] = std::move(t);
                return;
            }
            for (const Defeater* d : eng.unmitigated_on(a->id)) {
                double f = unmitigated_discount(*d);
                t.inputs.push_back({d->id, "defeater-cap", "unmitigated", std::nullopt, f});
                value *= f;
            }
            eng.note_mitigated(t, a->id);
            have_value = true;
        } else {
            std::vector<std::pair<const Evidence*, double>> supporting, refuting;
            for (const Evidence* ev : c.evidence_for(cl.id)) {
                if (ev->verdict == EvidenceVerdict::Inconclusive) continue;
                auto conf = evidence_confidence(*ev);
                if (!conf) {
                    eng.errors.push_back("missing verdict confidence on evidence " +
                                         ev->id.value + " supporting " + cl.id.value);
                    continue;
                }
                double v = *conf;
                for (const Defeater* d : eng.unmitigated_on(ev->id))
                    v *= unmitigated_discount(*d);
                if (ev->verdict == EvidenceVerdict::Supports)
                    supporting.push_back({ev, v});
                else
                    refuting.push_back({ev, v});
            }
            if (!supporting.empty() || !refuting.empty()) {
                t.rule = "evidence";
                double miss_all = 1.0;
                for (const auto& [ev, v] : supporting) {
                    t.inputs.push_back({ev->id, "evidence", "supports", std::nullopt, v});
                    miss_all *= 1.0 - v;
                }
                value = 1.0 - miss_all;
                for (const auto& [ev, v] : refuting) {
                    t.inputs.push_back({ev->id, "evidence", "refutes", std::nullopt, v});
                    value *= 1.0 - v;
                }
                have_value = true;
            } else if (leaf_override != assignment.overrides.end()) {
                t.rule = "leaf";
                value = leaf_override->second;
                t.inputs.push_back({cl.id, "leaf", "override", std::nullopt, value});
                have_value = true;
            } else if (cl.leaf_confidence) {
                t.rule = "leaf";
                value = *cl.leaf_confidence;
                t.inputs.push_back({cl.id, "leaf", "declared", std::nullopt, value});
                have_value = true;
            }
        }
        if (!have_value) {
            eng.errors.push_back("missing leaf confidence for claim " + cl.id.value);
            eng.out.confidences[cl.id] = 0.0;
            eng.out.traces[cl.id] = std::move(t);
            return;
        }
        for (const Defeater* d : eng.unmitigated_on(cl.id)) {
            double f = unmitigated_discount(*d);
            t.inputs.push_back({d->id, "defeater-cap", "unmitigated", std::nullopt, f});
            value *= f;
        }
        eng.note_mitigated(t, cl.id);
        t.value = value;
        eng.out.confidences[cl.id] = value;
        eng.out.traces[cl.id] = std::move(t);
    });
    if (!eng.errors.empty()) {
        result.errors = eng.errors;
        return result;
    }

    if (assumptions_used > 0 && assignment.assumed_confidence == 1.0)
        eng.out.warnings.push_back(
            "assumed_confidence is 1.0: " + std::to_string(assumptions_used) +
            " assumption(s) treated as certain");

    auto root_conf = eng.out.confidences.find(c.root);
    if (root_conf != eng.out.confidences.end()) {
        eng.out.root_confidence = root_conf->second;
        eng.out.root_assumption_load = eng.out.traces.at(c.root).assumption_load;
    } else {
        auto fringe = in_scope_fringe(c, c.root);
        if (!fringe.empty()) {
            double v = 1.0;
            int load = 0;
            for (const auto& f : fringe) {
                v *= eng.out.confidences.at(f);
                load += eng.out.traces.at(f).assumption_load;
            }
            eng.out.root_confidence = v;
            eng.out.root_assumption_load = load;
            eng.out.warnings.push_back(
                "root is out-of-scope; confidence taken over its in-scope fringe");
        }
    }
    eng.out.root_status = BinaryStatus::Undetermined;  // not meaningful in this mode
    result.value = std::move(eng.out);
    return result;
}

ExplainResult explain_status(const SafetyCase& c, const Assessment& a, const NodeId& id) {
    auto trace_it = a.traces.find(id);
    if (trace_it == a.traces.end()) {
        if (c.contains(id)) return {std::nullopt, "node \"" + id.value + "\" was not assessed"};
        return {std::nullopt, "unknown id \"" + id.value + "\""};
    }
    if (trace_it->second.rule == "out-of-scope")
        return {std::nullopt, "node \"" + id.value + "\" is out of scope"};

    TraceTree tree;
    tree.entry = trace_it->second;
    for (const auto& input : tree.entry.inputs) {
        if (a.traces.count(input.id) && (input.role == "child" || input.role == "side") &&
            input.note != "excluded") {
            auto sub = explain_status(c, a, input.id);
            if (sub.value) tree.inputs.push_back(std::move(*sub.value));
        }
    }
    return {std::move(tree), std::nullopt};
}

std::optional<BinaryStatus> recompute_status_from_trace(const TraceEntry& t) {
    BinaryStatus status;
    if (t.rule == "out-of-scope") return BinaryStatus::OutOfScope;
    if (t.rule == "assumption") {
        status = BinaryStatus::Assumed;
    } else if (t.rule == "evidence") {
        int supports = 0, refutes = 0;
        for (const auto& in : t.inputs) {
            if (in.role != "evidence") continue;
            if (in.note == "supports") ++supports;
            if (in.note == "refutes") ++refutes;
        }
        status = refutes > 0    ? BinaryStatus::Unsubstantiated
                 : supports > 0 ? BinaryStatus::Substantiated
                                : BinaryStatus::Undetermined;
    } else if (t.rule == "decomposition" || t.rule == "substitution") {
        status = BinaryStatus::Substantiated;
        bool any = false;
        for (const auto& in : t.inputs) {
            if ((in.role != "child" && in.role != "side") || in.note == "excluded") continue;
            if (!in.status) return std::nullopt;
            any = true;
            status = min_status(status, effective(*in.status));
        }
        if (!any) status = BinaryStatus::Undetermined;
    } else {
        return std::nullopt;
    }
    for (const auto& in : t.inputs)
        if (in.role == "defeater-cap") status = min_status(status, BinaryStatus::Undetermined);
    return status;
}

std::optional<double> recompute_confidence_from_trace(const TraceEntry& t) {
    if (t.rule == "out-of-scope") return std::nullopt;
    double value = 1.0;
    if (t.rule == "assumption" || t.rule == "leaf") {
        bool found = false;
        for (const auto& in : t.inputs)
            if (in.role == "assumed" || in.role == "leaf") {
                if (!in.value) return std::nullopt;
                value = *in.value;
                found = true;
            }
        if (!found) return std::nullopt;
    } else if (t.rule == "evidence") {
        double miss_all = 1.0;
        double refute_factor = 1.0;
        for (const auto& in : t.inputs) {
            if (in.role != "evidence" || !in.value) continue;
            if (in.note == "supports") miss_all *= 1.0 - *in.value;
            if (in.note == "refutes") refute_factor *= 1.0 - *in.value;
        }
        value = (1.0 - miss_all) * refute_factor;
    } else if (t.rule == "decomposition" || t.rule == "substitution") {
        for (const auto& in : t.inputs) {
            if ((in.role != "child" && in.role != "side") || in.note == "excluded") continue;
            if (!in.value) return std::nullopt;
            value *= *in.value;
        }
    } else {
        return std::nullopt;
    }
    for (const auto& in : t.inputs)
        if (in.role == "defeater-cap" && in.value) value *= *in.value;
    return value;
}

}  // namespace casec
