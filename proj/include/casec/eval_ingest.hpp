#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "casec/case_model.hpp"
#include "casec/cyber_domain.hpp"
#include "casec/diagnostics.hpp"

namespace casec {

enum class RunCondition { Aided, Unaided };

const char* to_string(RunCondition c);

// One evaluation run. CTF grading is binary; `score` is carried through for
// future weighted scoring but never drives verdicts.
struct RunRecord {
    std::string suite;
    std::string task;
    std::string setup;
    RunCondition condition = RunCondition::Aided;
    std::optional<ThreatTier> subject_tier;  // required for human-uplift setups
    bool success = false;
    std::optional<double> score;
    std::optional<std::string> transcript;
};

enum class RunFormat { Jsonl, Csv };

// Diagnostics codes for run-record parsing:
//   R001 empty input    R002 malformed row    R003 missing required field
//   R004 unknown field  R005 invalid value
struct RunParseResult {
    std::vector<RunRecord> records;  // valid rows, even when others fail
    std::vector<Diagnostic> diagnostics;

    bool has_errors() const {
        for (const auto& d : diagnostics)
            if (d.severity == Severity::Error) return true;
        return false;
    }
};

RunParseResult parse_runs(const SourceDocument& doc, RunFormat format);

struct AggregateKey {
    std::string suite;
    std::string setup;
    RunCondition condition = RunCondition::Aided;
    std::optional<ThreatTier> subject_tier;

    bool operator==(const AggregateKey&) const = default;
    auto operator<=>(const AggregateKey&) const = default;
};

// "suite/setup/aided[/tier]" - also the result-set key used in evidence
// payloads.
std::string to_string(const AggregateKey& key);

struct AggregateResult {
    AggregateKey key;
    std::int64_t n = 0;
    std::int64_t k = 0;
    double rate = 0.0;
    double lower_bound = 0.0;  // one-sided Clopper-Pearson at the stated alpha
    double upper_bound = 1.0;
    double alpha = 0.05;
};

// One result per distinct key, sorted by key; permutation-invariant in the
// input order.
std::vector<AggregateResult> aggregate(const std::vector<RunRecord>& records, double alpha);

// Repeated (suite, task, setup, condition, subject_tier) tuples. Repeats are
// legitimate repeated trials for stochastic systems; strict ingestion of
// deterministic graders treats them as errors.
std::vector<std::string> duplicate_runs(const std::vector<RunRecord>& records);

enum class UpliftVerdict { NoUplift, Uplift, Inconclusive };

const char* to_string(UpliftVerdict v);

struct UpliftResult {
    UpliftVerdict verdict = UpliftVerdict::Inconclusive;
    double lower_bound = 0.0;
    double upper_bound = 1.0;
    double threshold = 0.0;  // suite baseline at the risk model's threshold tier
    double alpha = 0.05;
    bool degenerate = false;  // n == 0
    std::optional<std::string> error;
};

// Conservative inability reading: NoUplift requires the one-sided upper bound
// strictly below the threshold baseline; Uplift requires the lower bound at or
// above it. A tie at the threshold is never NoUplift.
UpliftResult uplift_verdict(const AggregateResult& agg, const ProxyTaskSuite& suite,
                            const RiskModel& rm, double alpha);

struct ToEvidenceResult {
    std::optional<SafetyCase> value;
    std::optional<std::string> error;
};

// New case (input untouched) with a quantitative/technical/empirical/internal
// evidence node holding the aggregate; verdict maps NoUplift -> supports,
// Uplift -> refutes, Inconclusive -> inconclusive.
ToEvidenceResult to_evidence(const SafetyCase& c, const AggregateResult& agg,
                             const UpliftResult& verdict, const NodeId& evidence_id,
                             const NodeId& supports);

}  // namespace casec
