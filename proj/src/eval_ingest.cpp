#include "casec/eval_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "casec/binomial.hpp"
#include "casec/case_format.hpp"

namespace casec {

const char* to_string(RunCondition c) { return c == RunCondition::Aided ? "aided" : "unaided"; }

const char* to_string(UpliftVerdict v) {
    switch (v) {
        case UpliftVerdict::NoUplift: return "no-uplift";
        case UpliftVerdict::Uplift: return "uplift";
        default: return "inconclusive";
    }
}

std::string to_string(const AggregateKey& key) {
    std::string out = key.suite + "/" + key.setup + "/" + to_string(key.condition);
    if (key.subject_tier) out += std::string("/") + to_string(*key.subject_tier);
    return out;
}

namespace {

using nlohmann::json;

const char* kKnownFields[] = {"suite",   "task",    "setup",     "condition",
                              "subject_tier", "success", "score", "transcript"};

bool known_field(const std::string& name) {
    for (const char* f : kKnownFields)
        if (name == f) return true;
    return false;
}

struct RowReader {
    RunParseResult& result;
    int line = 1;
    bool row_ok = true;

    void error(const char* code, std::string msg) {
        result.diagnostics.push_back({Severity::Error, line, 1, code, std::move(msg)});
        row_ok = false;
    }
};

void parse_jsonl(const SourceDocument& doc, RunParseResult& result) {
    std::istringstream in(doc.text);
    std::string raw;
    int line_no = 0;
    bool saw_any = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        bool blank = raw.find_first_not_of(" \t") == std::string::npos;
        if (blank) continue;
        saw_any = true;
        RowReader row{result, line_no, true};
        json j = json::parse(raw, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            row.error("R002", "row is not a JSON object");
            continue;
        }
        for (const auto& [key, _] : j.items())
            if (!known_field(key)) row.error("R004", "unknown field \"" + key + "\"");
        RunRecord rec;
        auto get_string = [&](const char* field, std::string& into, bool required) {
            if (!j.contains(field)) {
                if (required) row.error("R003", std::string("missing field \"") + field + "\"");
                return false;
            }
            if (!j[field].is_string()) {
                row.error("R005", std::string("field \"") + field + "\" must be a string");
                return false;
            }
            into = j[field].get<std::string>();
            if (required && into.empty())
                row.error("R005", std::string("field \"") + field + "\" must be non-empty");
            return true;
        };
        get_string("suite", rec.suite, true);
        get_string("task", rec.task, true);
        get_string("setup", rec.setup, true);
        std::string condition;
        if (get_string("condition", condition, true)) {
            if (condition == "aided")
                rec.condition = RunCondition::Aided;
            else if (condition == "unaided")
                rec.condition = RunCondition::Unaided;
            else
                row.error("R005", "condition must be aided|unaided");
        }
        std::string tier;
        if (j.contains("subject_tier") && get_string("subject_tier", tier, false)) {
            auto parsed = parse_tier(tier);
            if (!parsed)
                row.error("R005", "invalid tier token \"" + tier + "\"");
            else
                rec.subject_tier = parsed;
        }
        if (!j.contains("success"))
            row.error("R003", "missing field \"success\"");
        else if (!j["success"].is_boolean())
            row.error("R005", "field \"success\" must be true or false");
        else
            rec.success = j["success"].get<bool>();
        if (j.contains("score")) {
            if (!j["score"].is_number() || !std::isfinite(j["score"].get<double>()))
                row.error("R005", "field \"score\" must be a finite number");
            else
                rec.score = j["score"].get<double>();
        }
        if (j.contains("transcript")) {
            std::string t;
            if (get_string("transcript", t, false)) rec.transcript = std::move(t);
        }
        if (row.row_ok) result.records.push_back(std::move(rec));
    }
    if (!saw_any)
        result.diagnostics.push_back({Severity::Error, 1, 1, "R001", "empty input"});
}

void parse_csv(const SourceDocument& doc, RunParseResult& result) {
    std::istringstream in(doc.text);
    std::string raw;
    int line_no = 0;
    std::vector<std::string> header;
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        cells.push_back(cur);
        return cells;
    };
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.find_first_not_of(" \t") == std::string::npos) continue;
        if (header.empty()) {
            header = split(raw);
            for (const auto& h : header)
                if (!known_field(h))
                    result.diagnostics.push_back({Severity::Error, line_no, 1, "R004",
                                                  "unknown field \"" + h + "\""});
            continue;
        }
        RowReader row{result, line_no, true};
        auto cells = split(raw);
        if (cells.size() != header.size()) {
            row.error("R002", "row has " + std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(header.size()));
            continue;
        }
        RunRecord rec;
        bool saw_suite = false, saw_task = false, saw_setup = false, saw_condition = false,
             saw_success = false;
        for (size_t i = 0; i < header.size(); ++i) {
            const std::string& field = header[i];
            const std::string& cell = cells[i];
            if (cell.empty()) continue;
            if (field == "suite") {
                rec.suite = cell;
                saw_suite = true;
            } else if (field == "task") {
                rec.task = cell;
                saw_task = true;
            } else if (field == "setup") {
                rec.setup = cell;
                saw_setup = true;
            } else if (field == "condition") {
                if (cell == "aided")
                    rec.condition = RunCondition::Aided;
                else if (cell == "unaided")
                    rec.condition = RunCondition::Unaided;
                else
                    row.error("R005", "condition must be aided|unaided");
                saw_condition = true;
            } else if (field == "subject_tier") {
                auto parsed = parse_tier(cell);
                if (!parsed)
                    row.error("R005", "invalid tier token \"" + cell + "\"");
                else
                    rec.subject_tier = parsed;
            } else if (field == "success") {
                if (cell == "true")
                    rec.success = true;
                else if (cell == "false")
                    rec.success = false;
                else
                    row.error("R005", "success must be true|false");
                saw_success = true;
            } else if (field == "score") {
                try {
                    rec.score = std::stod(cell);
                } catch (...) {
                    row.error("R005", "malformed score");
                }
                if (rec.score && !std::isfinite(*rec.score))
                    row.error("R005", "score must be finite");
            } else if (field == "transcript") {
                rec.transcript = cell;
            }
        }
        if (!saw_suite) row.error("R003", "missing field \"suite\"");
        if (!saw_task) row.error("R003", "missing field \"task\"");
        if (!saw_setup) row.error("R003", "missing field \"setup\"");
        if (!saw_condition) row.error("R003", "missing field \"condition\"");
        if (!saw_success) row.error("R003", "missing field \"success\"");
        if (row.row_ok) result.records.push_back(std::move(rec));
    }
    if (header.empty())
        result.diagnostics.push_back({Severity::Error, 1, 1, "R001", "empty input"});
}

}  // namespace

RunParseResult parse_runs(const SourceDocument& doc, RunFormat format) {
    RunParseResult result;
    if (format == RunFormat::Jsonl)
        parse_jsonl(doc, result);
    else
        parse_csv(doc, result);
    return result;
}

std::vector<std::string> duplicate_runs(const std::vector<RunRecord>& records) {
    std::map<std::string, int> counts;
    for (const auto& rec : records) {
        std::string key = rec.suite + "/" + rec.task + "/" + rec.setup + "/" +
                          to_string(rec.condition);
        if (rec.subject_tier) key += std::string("/") + to_string(*rec.subject_tier);
        ++counts[key];
    }
    std::vector<std::string> out;
    for (const auto& [key, n] : counts)
        if (n > 1) out.push_back(key + " repeated " + std::to_string(n) + " times");
    return out;
}

std::vector<AggregateResult> aggregate(const std::vector<RunRecord>& records, double alpha) {
    std::map<AggregateKey, std::pair<std::int64_t, std::int64_t>> tally;  // key -> (n, k)
    for (const auto& rec : records) {
        AggregateKey key{rec.suite, rec.setup, rec.condition, rec.subject_tier};
        auto& [n, k] = tally[key];
        ++n;
        if (rec.success) ++k;
    }
    std::vector<AggregateResult> out;
    out.reserve(tally.size());
    for (const auto& [key, nk] : tally) {
        AggregateResult agg;
        agg.key = key;
        agg.n = nk.first;
        agg.k = nk.second;
        agg.rate = double(agg.k) / double(agg.n);
        agg.alpha = alpha;
        agg.lower_bound = binomial_lower_bound(agg.k, agg.n, alpha);
        agg.upper_bound = binomial_upper_bound(agg.k, agg.n, alpha);
        out.push_back(std::move(agg));
    }
    return out;
}

UpliftResult uplift_verdict(const AggregateResult& agg, const ProxyTaskSuite& suite,
                            const RiskModel& rm, double alpha) {
    UpliftResult result;
    result.alpha = alpha;
    auto baseline = suite.baselines.find(rm.threshold_tier);
    if (baseline == suite.baselines.end()) {
        result.error = "suite \"" + suite.suite_id + "\" has no baseline for " +
                       std::string(to_string(rm.threshold_tier));
        return result;
    }
    result.threshold = baseline->second;
    if (agg.n == 0) {
        result.degenerate = true;
        result.lower_bound = 0.0;
        result.upper_bound = 1.0;
        return result;  // Inconclusive
    }
    result.lower_bound = binomial_lower_bound(agg.k, agg.n, alpha);
    result.upper_bound = binomial_upper_bound(agg.k, agg.n, alpha);
    if (result.upper_bound < result.threshold)
        result.verdict = UpliftVerdict::NoUplift;
    else if (result.lower_bound >= result.threshold)
        result.verdict = UpliftVerdict::Uplift;
    else
        result.verdict = UpliftVerdict::Inconclusive;
    return result;
}

ToEvidenceResult to_evidence(const SafetyCase& c, const AggregateResult& agg,
                             const UpliftResult& verdict, const NodeId& evidence_id,
                             const NodeId& supports) {
    if (c.contains(evidence_id))
        return {std::nullopt, "id \"" + evidence_id.value + "\" already used"};
    auto kind = c.kind_of(supports);
    if (!kind || *kind != NodeKind::Claim)
        return {std::nullopt, "\"" + supports.value + "\" is not a claim"};

    Evidence ev;
    ev.id = evidence_id;
    std::ostringstream desc;
    desc << "Aggregated evaluation results for " << to_string(agg.key) << ": " << agg.k << "/"
         << agg.n << " solved (rate " << format_real(agg.rate) << ", one-sided bounds ["
         << format_real(verdict.lower_bound) << ", " << format_real(verdict.upper_bound)
         << "] at alpha " << format_real(verdict.alpha) << ") against threshold "
         << format_real(verdict.threshold) << ": " << to_string(verdict.verdict) << ".";
    ev.description = desc.str();
    ev.supports = {supports};
    ev.taxonomy = EvidenceTaxonomy{
        EvidenceTaxonomy::Form::Quantitative, EvidenceTaxonomy::Channel::Technical,
        EvidenceTaxonomy::Basis::Empirical, EvidenceTaxonomy::Origin::Internal};
    ev.payload = "results:" + to_string(agg.key);
    switch (verdict.verdict) {
        case UpliftVerdict::NoUplift: ev.verdict = EvidenceVerdict::Supports; break;
        case UpliftVerdict::Uplift: ev.verdict = EvidenceVerdict::Refutes; break;
        default: ev.verdict = EvidenceVerdict::Inconclusive; break;
    }
    ev.verdict_confidence = 1.0 - verdict.alpha;

    NodeDeclarations decls;
    decls.title = c.title;
    decls.version = c.version;
    decls.meta = c.meta;
    decls.claims = c.claims;
    decls.arguments = c.arguments;
    decls.evidence = c.evidence;
    decls.evidence.push_back(std::move(ev));
    decls.defeaters = c.defeaters;
    BuildResult built = build_case(std::move(decls), c.root);
    if (!built.ok())
        return {std::nullopt, built.errors.empty() ? "construction failed"
                                                   : built.errors.front().message};
    return {std::move(built.value), std::nullopt};
}

}  // namespace casec
