#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "casec/node_id.hpp"

namespace casec {

enum class Scope { InScope, OutOfScope };

enum class ArgumentKind { Decomposition, Substitution };

enum class EvidenceVerdict { Supports, Refutes, Inconclusive };

enum class DefeaterStatus { Unmitigated, Mitigated, AcceptedResidual };

// Evidence classification, one token per facet.
struct EvidenceTaxonomy {
    enum class Form { Qualitative, Quantitative };
    enum class Channel { Technical, Social };
    enum class Basis { Theoretical, Empirical, Subjective };
    enum class Origin { Internal, External };

    Form form = Form::Qualitative;
    Channel channel = Channel::Technical;
    Basis basis = Basis::Empirical;
    Origin origin = Origin::Internal;

    bool operator==(const EvidenceTaxonomy&) const = default;
};

struct Claim {
    NodeId id;
    std::string statement;
    Scope scope = Scope::InScope;
    bool is_assumption = false;
    bool is_side_claim = false;
    std::optional<std::string> risk_model;  // encoded "actor/vec+vec/target/tier"
    std::optional<double> leaf_confidence;  // only on claims with no outgoing argument

    bool operator==(const Claim&) const = default;
};

struct Argument {
    NodeId id;
    ArgumentKind kind = ArgumentKind::Decomposition;
    NodeId parent;                 // claim being substantiated
    std::vector<NodeId> children;  // claims, declaration order
    std::optional<NodeId> side;    // side-claim; required by rules V03/V04
    std::optional<std::string> rationale;

    bool operator==(const Argument&) const = default;
};

struct Evidence {
    NodeId id;
    std::string description;
    std::vector<NodeId> supports;  // claims, >= 1
    std::optional<EvidenceTaxonomy> taxonomy;  // completeness checked by rule V08
    std::optional<std::string> payload;        // file path or result-set key
    EvidenceVerdict verdict = EvidenceVerdict::Inconclusive;
    std::optional<double> verdict_confidence;

    bool operator==(const Evidence&) const = default;
};

struct Defeater {
    NodeId id;
    std::string description;
    NodeId target;  // claim, argument or evidence
    DefeaterStatus status = DefeaterStatus::Unmitigated;
    std::optional<std::string> mitigation;
    double strength = 1.0;
    double mitigation_effectiveness = 0.0;

    bool operator==(const Defeater&) const = default;
};

enum class NodeKind { Claim, Argument, Evidence, Defeater };

// Immutable after construction; all operations on it are pure.
struct SafetyCase {
    std::string title;
    int version = 1;
    std::map<std::string, std::string> meta;
    std::vector<Claim> claims;        // declaration order
    std::vector<Argument> arguments;
    std::vector<Evidence> evidence;
    std::vector<Defeater> defeaters;
    NodeId root;

    const Claim* find_claim(const NodeId& id) const;
    const Argument* find_argument(const NodeId& id) const;
    const Evidence* find_evidence(const NodeId& id) const;
    const Defeater* find_defeater(const NodeId& id) const;
    std::optional<NodeKind> kind_of(const NodeId& id) const;
    bool contains(const NodeId& id) const { return kind_of(id).has_value(); }
    size_t node_count() const {
        return claims.size() + arguments.size() + evidence.size() + defeaters.size();
    }

    // The argument substantiating a claim, if any (first in declaration order
    // when a malformed case carries several; V02 reports that).
    const Argument* argument_of(const NodeId& claim_id) const;
    // Arguments listing the claim among their children.
    std::vector<const Argument*> parent_arguments_of(const NodeId& claim_id) const;
    // The argument carrying this claim as its side-claim.
    const Argument* side_attachment_of(const NodeId& claim_id) const;
    // Evidence supporting the claim, canonical id order.
    std::vector<const Evidence*> evidence_for(const NodeId& claim_id) const;
    // Defeaters targeting the node, canonical id order.
    std::vector<const Defeater*> defeaters_on(const NodeId& id) const;
};

// Structural equality: statement order and meta insertion order are
// irrelevant, per-node fields (including children order) are compared.
bool structurally_equal(const SafetyCase& a, const SafetyCase& b);

enum class BuildErrorCode {
    DuplicateId,
    DanglingReference,
    MissingRoot,
    SideClaimUnattached,
    SideClaimMultiplyAttached,
    SideNotFlagged,        // argument.side resolves to a claim without the side flag
    SideClaimAsChild,      // claim used both as a side and as an argument child
    ClaimMultipleParents,  // claim listed as child of more than one argument
    BadArity,              // no children, or single-child decomposition without rationale
    BadValue,              // confidence/strength outside [0,1], empty supports, ...
    MitigationInconsistent,
    LeafConfidenceMisplaced,
};

struct BuildError {
    BuildErrorCode code;
    NodeId subject;
    std::string message;
};

struct BuildResult {
    std::optional<SafetyCase> value;
    std::vector<BuildError> errors;  // complete list, not just the first

    bool ok() const { return value.has_value(); }
};

struct NodeDeclarations {
    std::string title;
    int version = 1;
    std::map<std::string, std::string> meta;
    std::vector<Claim> claims;
    std::vector<Argument> arguments;
    std::vector<Evidence> evidence;
    std::vector<Defeater> defeaters;
};

// Total constructor: every input yields a case or a non-empty error list.
// Cycles, unreachable nodes and extra apex claims are NOT rejected here;
// rules V01/V07 report them so that the rule engine has something to say
// about structurally suspect but representable cases.
BuildResult build_case(NodeDeclarations decls, NodeId root);

// Node view with incident edges, deterministic ordering.
struct NodeView {
    NodeId id;
    NodeKind kind = NodeKind::Claim;
    std::vector<NodeId> parents;   // claims above an argument / argument above a claim
    std::vector<NodeId> children;  // declaration order for argument children
    std::vector<NodeId> attached_evidence;
    std::vector<NodeId> attached_defeaters;
};

struct QueryResult {
    std::optional<NodeView> view;
    std::optional<std::string> error;
};

QueryResult query(const SafetyCase& c, const NodeId& id);

// Cycle check over the claim/argument edge relation
// (claim -> its arguments -> children and side-claims).
struct CycleReport {
    bool acyclic = true;
    std::vector<NodeId> witness;  // one cycle, first id repeated at the end
};

CycleReport check_dag(const SafetyCase& c);

struct SubgraphResult {
    std::optional<SafetyCase> value;
    std::optional<std::string> error;
};

// New case rooted at `id` containing exactly the nodes reachable downward,
// with evidence support lists trimmed to surviving claims.
SubgraphResult subgraph_rooted_at(const SafetyCase& c, const NodeId& id);

const char* to_string(ArgumentKind k);
const char* to_string(EvidenceVerdict v);
const char* to_string(DefeaterStatus s);
const char* to_string(NodeKind k);

}  // namespace casec
