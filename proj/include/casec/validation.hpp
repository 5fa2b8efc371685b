#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "casec/case_model.hpp"
#include "casec/diagnostics.hpp"

namespace casec {

// One finding from the rule engine. Rule codes V01..V12 are a stable public
// contract.
struct RuleReport {
    std::string rule;
    Severity severity = Severity::Error;
    NodeId subject;
    std::string message;
};

struct ValidationConfig {
    std::map<std::string, Severity> severity_overrides;  // rule code -> severity
    Severity treat_assumptions_as = Severity::Note;      // V05
    bool allow_unmitigated_defeaters = false;            // V06 error -> warning
};

struct RuleInfo {
    const char* code;
    Severity default_severity;
    const char* description;
};

// All twelve rules in code order; stable across runs.
const std::vector<RuleInfo>& list_rules();

// Run every rule and return the full report list, sorted by (rule, subject).
// Never stops at the first finding. `known_result_sets`, when provided,
// enables the V08 clause that payloads of the form "results:<key>" must name
// an ingested result set.
std::vector<RuleReport> validate(const SafetyCase& c, const ValidationConfig& config = {},
                                 const std::set<std::string>* known_result_sets = nullptr);

bool has_errors(const std::vector<RuleReport>& reports);

struct ConfigParseResult {
    ValidationConfig value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const {
        for (const auto& d : diagnostics)
            if (d.severity == Severity::Error) return false;
        return true;
    }
};

// Config text format, one setting per line:
//   rule.V06 = warning
//   treat_assumptions_as = warning
//   allow_unmitigated_defeaters = true
ConfigParseResult parse_validation_config(const SourceDocument& doc);

}  // namespace casec
