#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "casec/case_model.hpp"
#include "casec/diagnostics.hpp"

namespace casec {

// Threat actor tiers in ascending capability order. The order is load-bearing:
// uplift means reaching the effectiveness of a strictly higher tier.
enum class ThreatTier {
    NonTechnicalNovice = 0,
    TechnicalNonExpert = 1,
    CybersecurityApprentice = 2,
    CybersecurityPractitioner = 3,
    CybersecurityExpert = 4,
    ModeratelyResourcedNationState = 5,
    WellResourcedNationState = 6,
};

inline constexpr int kThreatTierCount = 7;

struct UsdInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ThreatTierInfo {
    ThreatTier tier;
    const char* name;  // token used in all text formats
    std::optional<UsdInterval> budget;
    const char* time_horizon;
    const char* resources;
};

const std::array<ThreatTierInfo, kThreatTierCount>& threat_tiers();
const char* to_string(ThreatTier t);
std::optional<ThreatTier> parse_tier(std::string_view token);

enum class Ordering { Less, Equal, Greater };

// Comparison along the ascending-capability order.
Ordering tier_cmp(ThreatTier a, ThreatTier b);

struct HarmVector {
    enum class Kind {
        VulnerabilityDiscovery,
        VulnerabilityExploitation,
        SpearPhishing,
        MalwareDevelopment,
        Other,
    };
    Kind kind = Kind::Other;
    std::string other_label;  // non-empty when kind == Other

    bool operator==(const HarmVector&) const = default;
};

std::string to_string(const HarmVector& v);
std::optional<HarmVector> parse_harm_vector(std::string_view token);

enum class Target { HardenedCni, Cni, SoftTarget };

const char* to_string(Target t);
std::optional<Target> parse_target(std::string_view token);

// Threat actor + harm vector(s) + target, plus the tier whose effectiveness
// the system must not confer on the actor.
struct RiskModel {
    ThreatTier actor = ThreatTier::NonTechnicalNovice;
    std::vector<HarmVector> vectors;
    Target target = Target::SoftTarget;
    ThreatTier threshold_tier = ThreatTier::TechnicalNonExpert;

    bool operator==(const RiskModel&) const = default;
};

// Violations (empty == ok): threshold not strictly above actor, empty vector
// set, blank other() label.
std::vector<std::string> validate_risk_model(const RiskModel& rm);

// Compact encoding "actor/vector[+vector...]/target/thresholdTier".
std::string format_risk_model(const RiskModel& rm);

struct RiskModelParse {
    std::optional<RiskModel> value;
    std::vector<std::string> errors;

    bool ok() const { return value.has_value(); }
};

// Decode without semantic validation; combine with validate_risk_model.
RiskModelParse parse_risk_model(std::string_view encoded);

enum class TaskDifficulty { Easy, Medium, Hard };

const char* to_string(TaskDifficulty d);

struct ProxyTask {
    std::string task_id;
    TaskDifficulty difficulty = TaskDifficulty::Medium;
    std::string description;

    bool operator==(const ProxyTask&) const = default;
};

// CTF-style task collection with per-tier solve-rate baselines. Baselines
// must be weakly increasing along the tier order; construction enforces it.
struct ProxyTaskSuite {
    std::string suite_id;
    std::vector<ProxyTask> tasks;
    std::map<ThreatTier, double> baselines;

    bool operator==(const ProxyTaskSuite&) const = default;
};

struct SuiteBuild {
    std::optional<ProxyTaskSuite> value;
    std::vector<std::string> errors;

    bool ok() const { return value.has_value(); }
};

SuiteBuild make_suite(std::string suite_id, std::vector<ProxyTask> tasks,
                      std::map<ThreatTier, double> baselines);

struct SuiteParseResult {
    std::optional<ProxyTaskSuite> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value(); }
};

// ".suite" text format: `suite ID`, `task ID difficulty=easy|medium|hard "desc"`,
// `baseline TIER = REAL` lines; `#` comments.
SuiteParseResult parse_suite(const SourceDocument& doc);
std::string serialize_suite(const ProxyTaskSuite& suite);

enum class SetupKind { FullyAutomated, AutomatedWithHumanOversight, HumanUplift };
enum class ElicitationLevel { Basic, TierMatched, Sota };

const char* to_string(SetupKind k);
const char* to_string(ElicitationLevel e);

struct EvalSetup {
    std::string setup_id;
    SetupKind kind = SetupKind::FullyAutomated;
    ElicitationLevel elicitation = ElicitationLevel::Basic;
    std::vector<std::string> affordances;  // tools, scaffolding, fine-tuning, compute
    std::optional<ThreatTier> subject_tier;  // required for human-uplift setups
};

std::vector<std::string> validate_setup(const EvalSetup& setup);

// ---------------------------------------------------------------------------
// Bundled template

struct TemplateParams {
    std::string system_name;
    std::map<std::string, std::string> meta;  // e.g. deployment_context
    std::vector<RiskModel> risk_models;       // first one is expanded in full
    std::vector<ProxyTaskSuite> suites;
    std::vector<EvalSetup> setups;
    // Optional per-suite threshold overrides; by default the threshold is the
    // suite baseline at the first risk model's threshold tier.
    std::map<std::string, double> threshold_overrides;
};

// The parameters used for the checked-in corpus template: one risk model
// (TechnicalNonExpert, discovery+exploitation, CNI, apprentice threshold),
// two suites, two setups. Baseline numbers are illustrative placeholders,
// not measurements.
TemplateParams default_template_params();

struct TemplateResult {
    std::optional<SafetyCase> value;
    std::vector<std::string> errors;

    bool ok() const { return value.has_value(); }
};

// Build the full cyber-inability case for the given parameters. The default
// instantiation validates with zero errors. Evaluation-result claims carry
// `eval_binding.<claim-id>` meta entries naming the (suite, setup, condition)
// aggregate they await.
TemplateResult instantiate_template(const TemplateParams& params);

// Deterministic 120-row JSONL run fixture for the default template: one row
// per (suite, setup, task, repetition), three repetitions per task. The
// baseline fixture solves 3/30 per aggregation key (well below every
// threshold); the adversarial one 18/30 (above the next-tier baselines).
std::string default_runs_fixture(bool adversarial);

}  // namespace casec
