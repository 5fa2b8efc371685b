#include "casec/case_model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace casec {

const char* to_string(ArgumentKind k) {
    return k == ArgumentKind::Decomposition ? "decomposition" : "substitution";
}

const char* to_string(EvidenceVerdict v) {
    switch (v) {
        case EvidenceVerdict::Supports: return "supports";
        case EvidenceVerdict::Refutes: return "refutes";
        default: return "inconclusive";
    }
}

const char* to_string(DefeaterStatus s) {
    switch (s) {
        case DefeaterStatus::Unmitigated: return "unmitigated";
        case DefeaterStatus::Mitigated: return "mitigated";
        default: return "accepted";
    }
}

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Claim: return "claim";
        case NodeKind::Argument: return "argument";
        case NodeKind::Evidence: return "evidence";
        default: return "defeater";
    }
}

const Claim* SafetyCase::find_claim(const NodeId& id) const {
    for (const auto& c : claims)
        if (c.id == id) return &c;
    return nullptr;
}

const Argument* SafetyCase::find_argument(const NodeId& id) const {
    for (const auto& a : arguments)
        if (a.id == id) return &a;
    return nullptr;
}

const Evidence* SafetyCase::find_evidence(const NodeId& id) const {
    for (const auto& e : evidence)
        if (e.id == id) return &e;
    return nullptr;
}

const Defeater* SafetyCase::find_defeater(const NodeId& id) const {
    for (const auto& d : defeaters)
        if (d.id == id) return &d;
    return nullptr;
}

std::optional<NodeKind> SafetyCase::kind_of(const NodeId& id) const {
    if (find_claim(id)) return NodeKind::Claim;
    if (find_argument(id)) return NodeKind::Argument;
    if (find_evidence(id)) return NodeKind::Evidence;
    if (find_defeater(id)) return NodeKind::Defeater;
    return std::nullopt;
}

const Argument* SafetyCase::argument_of(const NodeId& claim_id) const {
    for (const auto& a : arguments)
        if (a.parent == claim_id) return &a;
    return nullptr;
}

std::vector<const Argument*> SafetyCase::parent_arguments_of(const NodeId& claim_id) const {
    std::vector<const Argument*> out;
    for (const auto& a : arguments)
        if (std::find(a.children.begin(), a.children.end(), claim_id) != a.children.end())
            out.push_back(&a);
    return out;
}

const Argument* SafetyCase::side_attachment_of(const NodeId& claim_id) const {
    for (const auto& a : arguments)
        if (a.side && *a.side == claim_id) return &a;
    return nullptr;
}

std::vector<const Evidence*> SafetyCase::evidence_for(const NodeId& claim_id) const {
    std::vector<const Evidence*> out;
    for (const auto& e : evidence)
        if (std::find(e.supports.begin(), e.supports.end(), claim_id) != e.supports.end())
            out.push_back(&e);
    std::sort(out.begin(), out.end(), [](const Evidence* a, const Evidence* b) {
        return canonical_id_less(a->id, b->id);
    });
    return out;
}

std::vector<const Defeater*> SafetyCase::defeaters_on(const NodeId& id) const {
    std::vector<const Defeater*> out;
    for (const auto& d : defeaters)
        if (d.target == id) out.push_back(&d);
    std::sort(out.begin(), out.end(), [](const Defeater* a, const Defeater* b) {
        return canonical_id_less(a->id, b->id);
    });
    return out;
}

bool structurally_equal(const SafetyCase& a, const SafetyCase& b) {
    if (a.title != b.title || a.version != b.version || a.meta != b.meta || a.root != b.root)
        return false;
    if (a.claims.size() != b.claims.size() || a.arguments.size() != b.arguments.size() ||
        a.evidence.size() != b.evidence.size() || a.defeaters.size() != b.defeaters.size())
        return false;
    for (const auto& c : a.claims) {
        const Claim* other = b.find_claim(c.id);
        if (!other || !(c == *other)) return false;
    }
    for (const auto& g : a.arguments) {
        const Argument* other = b.find_argument(g.id);
        if (!other || !(g == *other)) return false;
    }
    for (const auto& e : a.evidence) {
        const Evidence* other = b.find_evidence(e.id);
        if (!other || !(e == *other)) return false;
    }
    for (const auto& d : a.defeaters) {
        const Defeater* other = b.find_defeater(d.id);
        if (!other || !(d == *other)) return false;
    }
    return true;
}

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

BuildResult build_case(NodeDeclarations decls, NodeId root) {
    BuildResult result;
    auto err = [&](BuildErrorCode code, const NodeId& subject, std::string message) {
        result.errors.push_back({code, subject, std::move(message)});
    };

    SafetyCase c;
    c.title = std::move(decls.title);
    c.version = decls.version;
    c.meta = std::move(decls.meta);
    c.claims = std::move(decls.claims);
    c.arguments = std::move(decls.arguments);
    c.evidence = std::move(decls.evidence);
    c.defeaters = std::move(decls.defeaters);
    c.root = std::move(root);

    // Uniqueness across all four node collections.
    std::unordered_set<NodeId> seen;
    auto check_unique = [&](const NodeId& id) {
        if (id.empty()) {
            err(BuildErrorCode::BadValue, id, "empty node id");
            return;
        }
        if (!seen.insert(id).second)
            err(BuildErrorCode::DuplicateId, id, "duplicate id \"" + id.value + "\"");
    };
    for (const auto& n : c.claims) check_unique(n.id);
    for (const auto& n : c.arguments) check_unique(n.id);
    for (const auto& n : c.evidence) check_unique(n.id);
    for (const auto& n : c.defeaters) check_unique(n.id);

    auto require_claim = [&](const NodeId& ref, const NodeId& subject, const char* role) {
        if (c.find_claim(ref)) return true;
        err(BuildErrorCode::DanglingReference, subject,
            std::string(role) + " \"" + ref.value + "\" does not resolve to a claim");
        return false;
    };

    for (const auto& cl : c.claims) {
        if (cl.leaf_confidence) {
            if (!in_unit_interval(*cl.leaf_confidence))
                err(BuildErrorCode::BadValue, cl.id, "leaf confidence outside [0,1]");
            if (c.argument_of(cl.id))
                err(BuildErrorCode::LeafConfidenceMisplaced, cl.id,
                    "leaf_confidence set on a claim with an outgoing argument");
        }
    }

    for (const auto& a : c.arguments) {
        require_claim(a.parent, a.id, "argument parent");
        if (a.children.empty())
            err(BuildErrorCode::BadArity, a.id, "argument has no children");
        for (const auto& ch : a.children) require_claim(ch, a.id, "argument child");
        if (a.kind == ArgumentKind::Decomposition && a.children.size() == 1 && !a.rationale)
            err(BuildErrorCode::BadArity, a.id,
                "single-child decomposition requires a rationale");
        if (a.side) {
            if (require_claim(*a.side, a.id, "argument side")) {
                const Claim* side = c.find_claim(*a.side);
                if (!side->is_side_claim)
                    err(BuildErrorCode::SideNotFlagged, a.id,
                        "side reference \"" + a.side->value + "\" is not flagged as a side-claim");
            }
        }
    }

    // Side-claim attachment: exactly one argument per flagged side-claim,
    // and a side-claim never doubles as an argument child.
    for (const auto& cl : c.claims) {
        int attachments = 0;
        for (const auto& a : c.arguments)
            if (a.side && *a.side == cl.id) ++attachments;
        if (cl.is_side_claim) {
            if (attachments == 0)
                err(BuildErrorCode::SideClaimUnattached, cl.id,
                    "side-claim attached to no argument");
            else if (attachments > 1)
                err(BuildErrorCode::SideClaimMultiplyAttached, cl.id,
                    "side-claim attached to multiple arguments");
        } else if (attachments > 1) {
            err(BuildErrorCode::SideClaimMultiplyAttached, cl.id,
                "claim used as side of multiple arguments");
        }
        auto parents = c.parent_arguments_of(cl.id);
        if (parents.size() > 1)
            err(BuildErrorCode::ClaimMultipleParents, cl.id,
                "claim is a child of more than one argument");
        if (cl.is_side_claim && !parents.empty())
            err(BuildErrorCode::SideClaimAsChild, cl.id,
                "side-claim also appears as an argument child");
    }

    for (const auto& e : c.evidence) {
        if (e.supports.empty())
            err(BuildErrorCode::BadValue, e.id, "evidence supports no claim");
        for (const auto& s : e.supports) require_claim(s, e.id, "evidence support");
        if (e.verdict_confidence && !in_unit_interval(*e.verdict_confidence))
            err(BuildErrorCode::BadValue, e.id, "verdict confidence outside [0,1]");
    }

    for (const auto& d : c.defeaters) {
        auto kind = c.kind_of(d.target);
        if (!kind)
            err(BuildErrorCode::DanglingReference, d.id,
                "defeater target \"" + d.target.value + "\" does not resolve");
        else if (*kind == NodeKind::Defeater)
            err(BuildErrorCode::DanglingReference, d.id,
                "defeater target must be a claim, argument or evidence");
        if (!in_unit_interval(d.strength))
            err(BuildErrorCode::BadValue, d.id, "strength outside [0,1]");
        if (!in_unit_interval(d.mitigation_effectiveness))
            err(BuildErrorCode::BadValue, d.id, "effectiveness outside [0,1]");
        if (d.status == DefeaterStatus::Mitigated &&
            (!d.mitigation || d.mitigation->empty() || d.mitigation_effectiveness <= 0.0))
            err(BuildErrorCode::MitigationInconsistent, d.id,
                "mitigated defeater needs mitigation text and effectiveness > 0");
    }

    if (!c.find_claim(c.root))
        err(BuildErrorCode::MissingRoot, c.root,
            "root \"" + c.root.value + "\" does not resolve to a claim");

    if (result.errors.empty()) result.value = std::move(c);
    return result;
}

QueryResult query(const SafetyCase& c, const NodeId& id) {
    auto kind = c.kind_of(id);
    if (!kind) return {std::nullopt, "unknown id \"" + id.value + "\""};

    NodeView v;
    v.id = id;
    v.kind = *kind;
    auto sorted = [](std::vector<NodeId> ids) {
        std::sort(ids.begin(), ids.end(), CanonicalIdLess{});
        return ids;
    };
    switch (*kind) {
        case NodeKind::Claim: {
            std::vector<NodeId> parents;
            for (const Argument* a : c.parent_arguments_of(id)) parents.push_back(a->id);
            if (const Argument* host = c.side_attachment_of(id)) parents.push_back(host->id);
            v.parents = sorted(std::move(parents));
            if (const Argument* a = c.argument_of(id)) v.children.push_back(a->id);
            break;
        }
        case NodeKind::Argument: {
            const Argument* a = c.find_argument(id);
            v.parents.push_back(a->parent);
            v.children = a->children;  // declaration order
            if (a->side) v.children.push_back(*a->side);
            break;
        }
        case NodeKind::Evidence: {
            const Evidence* e = c.find_evidence(id);
            std::vector<NodeId> parents = e->supports;
            v.parents = sorted(std::move(parents));
            break;
        }
        case NodeKind::Defeater: {
            const Defeater* d = c.find_defeater(id);
            v.parents.push_back(d->target);
            break;
        }
    }
    for (const Evidence* e : c.evidence_for(id)) v.attached_evidence.push_back(e->id);
    for (const Defeater* d : c.defeaters_on(id)) v.attached_defeaters.push_back(d->id);
    return {std::move(v), std::nullopt};
}

CycleReport check_dag(const SafetyCase& c) {
    // Edges of the claim/argument relation: claim -> each of its arguments,
    // argument -> children and side. Iterative three-color DFS with a parent
    // trail so one witness path can be reconstructed.
    std::vector<NodeId> order;
    std::unordered_map<NodeId, std::vector<NodeId>> next;
    for (const auto& cl : c.claims) {
        order.push_back(cl.id);
        next[cl.id];
    }
    for (const auto& a : c.arguments) {
        order.push_back(a.id);
        next[a.parent].push_back(a.id);
        auto& out = next[a.id];
        out = a.children;
        if (a.side) out.push_back(*a.side);
    }
    std::sort(order.begin(), order.end(), CanonicalIdLess{});

    enum class Color { White, Grey, Black };
    std::unordered_map<NodeId, Color> color;
    for (const auto& id : order) color[id] = Color::White;
    std::unordered_map<NodeId, NodeId> came_from;

    for (const auto& start : order) {
        if (color[start] != Color::White) continue;
        std::vector<std::pair<NodeId, size_t>> stack{{start, 0}};
        color[start] = Color::Grey;
        while (!stack.empty()) {
            auto& [id, edge_index] = stack.back();
            auto& edges = next[id];
            if (edge_index >= edges.size()) {
                color[id] = Color::Black;
                stack.pop_back();
                continue;
            }
            NodeId target = edges[edge_index++];
            auto it = color.find(target);
            if (it == color.end()) continue;  // dangling reference, not our concern
            if (it->second == Color::Grey) {
                // walk the grey stack back to the target
                CycleReport report;
                report.acyclic = false;
                std::vector<NodeId> cycle;  // without the closing repeat
                for (auto rit = stack.rbegin(); rit != stack.rend(); ++rit) {
                    cycle.push_back(rit->first);
                    if (rit->first == target) break;
                }
                std::reverse(cycle.begin(), cycle.end());
                // Rotate so the witness starts at the canonically least claim.
                size_t start = 0;
                bool found_claim = false;
                for (size_t i = 0; i < cycle.size(); ++i) {
                    bool is_claim = c.find_claim(cycle[i]) != nullptr;
                    if (is_claim && (!found_claim || canonical_id_less(cycle[i], cycle[start]))) {
                        start = i;
                        found_claim = true;
                    }
                }
                for (size_t i = 0; i <= cycle.size(); ++i)
                    report.witness.push_back(cycle[(start + i) % cycle.size()]);
                return report;
            }
            if (it->second == Color::White) {
                it->second = Color::Grey;
                stack.push_back({target, 0});
            }
        }
    }
    return {};
}

SubgraphResult subgraph_rooted_at(const SafetyCase& c, const NodeId& id) {
    auto kind = c.kind_of(id);
    if (!kind) return {std::nullopt, "unknown id \"" + id.value + "\""};
    if (*kind != NodeKind::Claim)
        return {std::nullopt, "\"" + id.value + "\" is not a claim"};

    // Downward closure over claim -> argument -> children/side edges.
    std::unordered_set<NodeId> kept;
    std::vector<NodeId> work{id};
    kept.insert(id);
    while (!work.empty()) {
        NodeId cur = work.back();
        work.pop_back();
        for (const auto& a : c.arguments) {
            if (!(a.parent == cur) || !kept.insert(a.id).second) continue;
            auto push_claim = [&](const NodeId& cl) {
                if (kept.insert(cl).second) work.push_back(cl);
            };
            for (const auto& ch : a.children) push_claim(ch);
            if (a.side) push_claim(*a.side);
        }
    }

    NodeDeclarations decls;
    decls.title = c.title;
    decls.version = c.version;
    decls.meta = c.meta;
    for (const auto& cl : c.claims) {
        if (!kept.count(cl.id)) continue;
        Claim copy = cl;
        // A side-claim extracted as the root loses its attachment along with
        // the argument it qualified.
        if (copy.id == id) copy.is_side_claim = false;
        decls.claims.push_back(std::move(copy));
    }
    for (const auto& a : c.arguments)
        if (kept.count(a.id)) decls.arguments.push_back(a);
    for (const auto& e : c.evidence) {
        Evidence copy = e;
        std::erase_if(copy.supports, [&](const NodeId& s) { return !kept.count(s); });
        if (!copy.supports.empty()) {
            decls.evidence.push_back(std::move(copy));
            kept.insert(e.id);
        }
    }
    for (const auto& d : c.defeaters)
        if (kept.count(d.target)) decls.defeaters.push_back(d);

    BuildResult built = build_case(std::move(decls), id);
    if (!built.ok())
        return {std::nullopt, "subgraph violates case invariants: " +
                                  (built.errors.empty() ? std::string("?")
                                                        : built.errors.front().message)};
    return {std::move(built.value), std::nullopt};
}

}  // namespace casec
