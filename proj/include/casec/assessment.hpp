#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "casec/case_model.hpp"
#include "casec/validation.hpp"

namespace casec {

// Aggregation order: Unsubstantiated < Undetermined < Assumed < Substantiated.
// OutOfScope marks claims excluded from aggregation entirely.
enum class BinaryStatus {
    Unsubstantiated = 0,
    Undetermined = 1,
    Assumed = 2,
    Substantiated = 3,
    OutOfScope = 4,
};

const char* to_string(BinaryStatus s);

struct TraceInput {
    NodeId id;
    std::string role;  // child | side | evidence | defeater | defeater-cap
    std::string note;  // e.g. effective verdict, defeater status, discount factor
    std::optional<BinaryStatus> status;
    std::optional<double> value;
};

// Enough to recompute the node's result without the case.
struct TraceEntry {
    NodeId node;
    std::string rule;  // out-of-scope | assumption | evidence | decomposition | substitution
    std::vector<TraceInput> inputs;
    int assumption_load = 0;
    std::optional<BinaryStatus> status;
    std::optional<double> value;
};

struct ConfidenceAssignment {
    // Per-node overrides: a claim id overrides that leaf claim's confidence,
    // an evidence id overrides its verdict confidence.
    std::map<NodeId, double> overrides;
    double assumed_confidence = 1.0;
};

struct Assessment {
    enum class Mode { Binary, Confidence };
    Mode mode = Mode::Binary;
    std::map<NodeId, BinaryStatus> statuses;  // every claim, binary mode
    std::map<NodeId, double> confidences;     // every in-scope claim, confidence mode
    std::map<NodeId, TraceEntry> traces;      // per claim
    // Verdict at the declared root. An out-of-scope root delegates to the
    // in-scope fringe below it (the claims the case actually assesses).
    BinaryStatus root_status = BinaryStatus::Undetermined;
    std::optional<double> root_confidence;
    int root_assumption_load = 0;
    std::vector<std::string> warnings;
};

struct AssessResult {
    std::optional<Assessment> value;
    std::vector<std::string> errors;

    bool ok() const { return value.has_value(); }
};

// Bottom-up three-valued substantiation. Refuses cases whose validation (with
// the given config) reports errors. Assumed claims count toward the
// assumption-load carried in traces instead of degrading their parents;
// unmitigated defeaters cap their target at Undetermined.
AssessResult assess_binary(const SafetyCase& c, const ValidationConfig& config = {});

// Bottom-up confidence propagation: noisy-OR across supporting evidence,
// products across decomposition/substitution members, multiplicative discount
// 1 - strength*(1 - effectiveness) for unmitigated defeaters. The propagation
// formulas assume independence between branches; treat results as a modelling
// aid, not a calibrated probability.
AssessResult assess_confidence(const SafetyCase& c, const ConfidenceAssignment& assignment = {},
                               const ValidationConfig& config = {});

struct TraceTree {
    TraceEntry entry;
    std::vector<TraceTree> inputs;  // subtrees for claim inputs
};

struct ExplainResult {
    std::optional<TraceTree> value;
    std::optional<std::string> error;
};

// Full derivation tree for one node; errors on unknown or out-of-scope ids.
ExplainResult explain_status(const SafetyCase& c, const Assessment& a, const NodeId& id);

// Re-derive a node's result from its trace alone (consistency checks).
std::optional<BinaryStatus> recompute_status_from_trace(const TraceEntry& t);
std::optional<double> recompute_confidence_from_trace(const TraceEntry& t);

}  // namespace casec
