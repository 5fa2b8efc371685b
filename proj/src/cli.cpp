#include "casec/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "casec/assessment.hpp"
#include "casec/case_format.hpp"
#include "casec/cyber_domain.hpp"
#include "casec/eval_ingest.hpp"
#include "casec/render.hpp"
#include "casec/validation.hpp"

#include <json.hpp>

namespace casec::cli {

namespace {

namespace fs = std::filesystem;

const char* kUsage =
    "usage: casec <command> [options]\n"
    "\n"
    "commands:\n"
    "  validate <case.cae> [--config FILE] [--format text|json]\n"
    "  assess   <case.cae> [--confidence] [--runs FILE] [--suite FILE ...]\n"
    "           [--alpha R] [--require substantiated] [--leaf-default R]\n"
    "           [--config FILE] [--format text|json]\n"
    "  render   <case.cae> --format dot|md [--out FILE] [--config FILE]\n"
    "  ingest   <runs> [--format jsonl|csv] [--alpha R] [--summary] [--strict]\n"
    "  init     --template cyber-inability [--out DIR]\n"
    "\n"
    "exit codes: 0 ok, 1 validation errors, 2 usage/IO/parse error,\n"
    "            3 required assessment status not met\n";

struct Args {
    std::vector<std::string> positional;
    std::map<std::string, std::string> flags;       // --key value
    std::vector<std::string> suites;                // repeated --suite
    std::vector<std::string> switches;              // bare --key
};

const char* kValueFlags[] = {"--config", "--format",  "--out",   "--runs",
                             "--alpha",  "--require", "--template", "--leaf-default"};
const char* kSwitchFlags[] = {"--confidence", "--summary", "--strict"};

bool parse_args(const std::vector<std::string>& argv, size_t start, Args& args,
                std::ostream& err) {
    for (size_t i = start; i < argv.size(); ++i) {
        const std::string& tok = argv[i];
        if (!tok.starts_with("--")) {
            args.positional.push_back(tok);
            continue;
        }
        bool is_switch = false;
        for (const char* f : kSwitchFlags)
            if (tok == f) is_switch = true;
        if (is_switch) {
            args.switches.push_back(tok);
            continue;
        }
        bool is_value = tok == "--suite";
        for (const char* f : kValueFlags)
            if (tok == f) is_value = true;
        if (!is_value) {
            err << "casec: unknown flag " << tok << "\n" << kUsage;
            return false;
        }
        if (i + 1 >= argv.size()) {
            err << "casec: flag " << tok << " needs a value\n";
            return false;
        }
        if (tok == "--suite")
            args.suites.push_back(argv[++i]);
        else
            args.flags[tok] = argv[++i];
    }
    return true;
}

bool has_switch(const Args& args, const std::string& name) {
    for (const auto& s : args.switches)
        if (s == name) return true;
    return false;
}

std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "casec: cannot read " << path << "\n";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        err << "casec: cannot write " << path << "\n";
        return false;
    }
    out << content;
    return true;
}

void print_diagnostics(const std::string& origin, const std::vector<Diagnostic>& diags,
                       std::ostream& err) {
    for (const auto& d : diags)
        err << origin << ":" << d.line << ":" << d.column << ": " << to_string(d.severity)
            << " " << d.code << ": " << d.message << "\n";
}

std::optional<SafetyCase> load_case(const std::string& path, std::ostream& err) {
    auto text = read_file(path, err);
    if (!text) return std::nullopt;
    ParseResult parsed = parse_case({*text, path});
    print_diagnostics(path, parsed.diagnostics, err);
    if (!parsed.ok()) return std::nullopt;
    return std::move(parsed.value);
}

std::optional<ValidationConfig> load_config(const Args& args, std::ostream& err) {
    std::string path;
    auto it = args.flags.find("--config");
    if (it != args.flags.end()) {
        path = it->second;
    } else if (const char* env = std::getenv("CASEC_CONFIG")) {
        path = env;
    }
    if (path.empty()) return ValidationConfig{};
    auto text = read_file(path, err);
    if (!text) return std::nullopt;
    ConfigParseResult parsed = parse_validation_config({*text, path});
    print_diagnostics(path, parsed.diagnostics, err);
    if (!parsed.ok()) return std::nullopt;
    return parsed.value;
}

void print_findings_text(const std::vector<RuleReport>& findings, std::ostream& out) {
    size_t errors = 0, warnings = 0, notes = 0;
    for (const auto& f : findings) {
        out << to_string(f.severity) << " " << f.rule << " " << f.subject.value << ": "
            << f.message << "\n";
        if (f.severity == Severity::Error) ++errors;
        if (f.severity == Severity::Warning) ++warnings;
        if (f.severity == Severity::Note) ++notes;
    }
    out << errors << " errors, " << warnings << " warnings, " << notes << " notes\n";
}

void print_findings_json(const std::vector<RuleReport>& findings, std::ostream& out) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
        nlohmann::ordered_json o;
        o["rule"] = f.rule;
        o["severity"] = to_string(f.severity);
        o["subject"] = f.subject.value;
        o["message"] = f.message;
        arr.push_back(std::move(o));
    }
    out << arr.dump(2) << "\n";
}

int cmd_validate(const Args& args, std::ostream& out, std::ostream& err) {
    if (args.positional.size() != 1) {
        err << "casec validate: expected exactly one case file\n" << kUsage;
        return kExitUsage;
    }
    std::string format = args.flags.count("--format") ? args.flags.at("--format") : "text";
    if (format != "text" && format != "json") {
        err << "casec validate: --format must be text|json\n";
        return kExitUsage;
    }
    auto config = load_config(args, err);
    if (!config) return kExitUsage;
    auto c = load_case(args.positional[0], err);
    if (!c) return kExitUsage;
    auto findings = validate(*c, *config);
    if (format == "json")
        print_findings_json(findings, out);
    else
        print_findings_text(findings, out);
    return has_errors(findings) ? kExitValidationErrors : kExitOk;
}

// Walk claim -> parent argument -> claim upward until a risk-model binding.
std::optional<RiskModel> risk_model_for(const SafetyCase& c, NodeId claim_id) {
    std::set<NodeId> seen;
    while (seen.insert(claim_id).second) {
        const Claim* cl = c.find_claim(claim_id);
        if (!cl) return std::nullopt;
        if (cl->risk_model) {
            auto parsed = parse_risk_model(*cl->risk_model);
            if (parsed.ok()) return parsed.value;
            return std::nullopt;
        }
        auto parents = c.parent_arguments_of(claim_id);
        const Argument* host = c.side_attachment_of(claim_id);
        if (!parents.empty())
            claim_id = parents.front()->parent;
        else if (host)
            claim_id = host->parent;
        else
            return std::nullopt;
    }
    return std::nullopt;
}

// Next unused evidence id E9.1, E9.2, ... for ingested results.
NodeId next_result_evidence_id(const SafetyCase& c, int& counter) {
    for (;;) {
        NodeId id("E9." + std::to_string(++counter));
        if (!c.contains(id)) return id;
    }
}

int cmd_assess(const Args& args, std::ostream& out, std::ostream& err) {
    if (args.positional.size() != 1) {
        err << "casec assess: expected exactly one case file\n" << kUsage;
        return kExitUsage;
    }
    std::string format = args.flags.count("--format") ? args.flags.at("--format") : "text";
    if (format != "text" && format != "json") {
        err << "casec assess: --format must be text|json\n";
        return kExitUsage;
    }
    if (args.flags.count("--require") && args.flags.at("--require") != "substantiated") {
        err << "casec assess: --require only supports \"substantiated\"\n";
        return kExitUsage;
    }
    double alpha = 0.05;
    if (args.flags.count("--alpha")) {
        try {
            alpha = std::stod(args.flags.at("--alpha"));
        } catch (...) {
            alpha = -1.0;
        }
        if (!(alpha > 0.0 && alpha < 1.0)) {
            err << "casec assess: --alpha must be in (0,1)\n";
            return kExitUsage;
        }
    }
    auto config = load_config(args, err);
    if (!config) return kExitUsage;
    auto c = load_case(args.positional[0], err);
    if (!c) return kExitUsage;

    std::set<std::string> result_sets;
    if (args.flags.count("--runs")) {
        const std::string& runs_path = args.flags.at("--runs");
        auto text = read_file(runs_path, err);
        if (!text) return kExitUsage;
        RunFormat rf = runs_path.ends_with(".csv") ? RunFormat::Csv : RunFormat::Jsonl;
        RunParseResult runs = parse_runs({*text, runs_path}, rf);
        print_diagnostics(runs_path, runs.diagnostics, err);
        if (runs.records.empty()) {
            err << "casec assess: no valid run records in " << runs_path << "\n";
            return kExitUsage;
        }
        std::map<std::string, ProxyTaskSuite> suites;
        for (const auto& spath : args.suites) {
            auto stext = read_file(spath, err);
            if (!stext) return kExitUsage;
            SuiteParseResult sp = parse_suite({*stext, spath});
            print_diagnostics(spath, sp.diagnostics, err);
            if (!sp.ok()) return kExitUsage;
            suites[sp.value->suite_id] = std::move(*sp.value);
        }
        auto aggregates = aggregate(runs.records, alpha);
        std::map<std::string, AggregateResult> by_key;
        for (const auto& agg : aggregates) {
            by_key[to_string(agg.key)] = agg;
            result_sets.insert(to_string(agg.key));
        }
        int eid_counter = 0;
        out << "ingested " << runs.records.size() << " records into " << aggregates.size()
            << " result sets (alpha " << format_real(alpha) << ")\n";
        // Bindings in canonical claim order for deterministic evidence ids;
        // copied out because attaching evidence replaces the case.
        std::vector<std::pair<NodeId, std::string>> bound;
        for (const auto& cl : c->claims) {
            auto it = c->meta.find("eval_binding." + cl.id.value);
            if (it != c->meta.end()) bound.push_back({cl.id, it->second});
        }
        std::sort(bound.begin(), bound.end(),
                  [](const auto& a, const auto& b) { return canonical_id_less(a.first, b.first); });
        for (const auto& [claim_id, key] : bound) {
            auto agg_it = by_key.find(key);
            if (agg_it == by_key.end()) {
                err << "casec assess: no aggregate for binding " << claim_id.value << " -> "
                    << key << "\n";
                continue;
            }
            auto suite_it = suites.find(agg_it->second.key.suite);
            if (suite_it == suites.end()) {
                err << "casec assess: no suite file for \"" << agg_it->second.key.suite
                    << "\" (pass it with --suite)\n";
                return kExitUsage;
            }
            auto rm = risk_model_for(*c, claim_id);
            if (!rm) {
                err << "casec assess: no risk model found above claim " << claim_id.value
                    << "\n";
                return kExitUsage;
            }
            UpliftResult uv = uplift_verdict(agg_it->second, suite_it->second, *rm, alpha);
            if (uv.error) {
                err << "casec assess: " << *uv.error << "\n";
                return kExitUsage;
            }
            NodeId eid = next_result_evidence_id(*c, eid_counter);
            auto attached = to_evidence(*c, agg_it->second, uv, eid, claim_id);
            if (!attached.value) {
                err << "casec assess: " << *attached.error << "\n";
                return kExitUsage;
            }
            c = std::move(attached.value);
            out << claim_id.value << " <- " << key << ": " << to_string(uv.verdict)
                << " (bounds [" << format_real(uv.lower_bound) << ", "
                << format_real(uv.upper_bound) << "], threshold "
                << format_real(uv.threshold) << ", evidence " << eid.value << ")\n";
        }
    }

    auto findings = validate(*c, *config, args.flags.count("--runs") ? &result_sets : nullptr);
    if (has_errors(findings)) {
        print_findings_text(findings, out);
        return kExitValidationErrors;
    }

    AssessResult binary = assess_binary(*c, *config);
    if (!binary.ok()) {
        for (const auto& e : binary.errors) err << "casec assess: " << e << "\n";
        return kExitValidationErrors;
    }
    const Assessment& a = *binary.value;

    std::optional<Assessment> confidence;
    if (has_switch(args, "--confidence")) {
        ConfidenceAssignment assignment;
        if (args.flags.count("--leaf-default")) {
            double v = -1.0;
            try {
                v = std::stod(args.flags.at("--leaf-default"));
            } catch (...) {
            }
            if (!(v >= 0.0 && v <= 1.0)) {
                err << "casec assess: --leaf-default must be in [0,1]\n";
                return kExitUsage;
            }
            for (const auto& ev : c->evidence)
                if (!ev.verdict_confidence) assignment.overrides[ev.id] = v;
            for (const auto& cl : c->claims)
                if (!c->argument_of(cl.id) && c->evidence_for(cl.id).empty() &&
                    !cl.leaf_confidence && !cl.is_assumption)
                    assignment.overrides[cl.id] = v;
        }
        AssessResult conf = assess_confidence(*c, assignment, *config);
        if (!conf.ok()) {
            for (const auto& e : conf.errors) err << "casec assess: " << e << "\n";
            return kExitUsage;
        }
        confidence = std::move(*conf.value);
    }

    if (format == "json") {
        nlohmann::ordered_json o;
        o["root"] = c->root.value;
        o["root_status"] = to_string(a.root_status);
        o["assumption_load"] = a.root_assumption_load;
        o["statuses"] = nlohmann::ordered_json::object();
        for (const auto& [id, st] : a.statuses) o["statuses"][id.value] = to_string(st);
        if (confidence) {
            o["root_confidence"] = confidence->root_confidence ? *confidence->root_confidence
                                                               : 0.0;
            o["confidences"] = nlohmann::ordered_json::object();
            for (const auto& [id, v] : confidence->confidences) o["confidences"][id.value] = v;
        }
        out << o.dump(2) << "\n";
    } else {
        std::vector<const Claim*> claims;
        for (const auto& cl : c->claims) claims.push_back(&cl);
        std::sort(claims.begin(), claims.end(), [](const Claim* x, const Claim* y) {
            return canonical_id_less(x->id, y->id);
        });
        for (const Claim* cl : claims) {
            out << cl->id.value << ": " << to_string(a.statuses.at(cl->id));
            if (confidence) {
                auto it = confidence->confidences.find(cl->id);
                if (it != confidence->confidences.end())
                    out << " (confidence " << format_real(it->second) << ")";
            }
            out << "\n";
        }
        out << "root " << c->root.value << ": " << to_string(a.root_status)
            << " (assumption load " << a.root_assumption_load << ")";
        if (confidence && confidence->root_confidence)
            out << ", confidence " << format_real(*confidence->root_confidence);
        out << "\n";
    }
    for (const auto& w : a.warnings) err << "note: " << w << "\n";
    if (confidence)
        for (const auto& w : confidence->warnings) err << "note: " << w << "\n";

    if (args.flags.count("--require") && a.root_status != BinaryStatus::Substantiated) {
        err << "casec assess: required status substantiated, got "
            << to_string(a.root_status) << "\n";
        return kExitRequireFailed;
    }
    return kExitOk;
}

int cmd_render(const Args& args, std::ostream& out, std::ostream& err) {
    if (args.positional.size() != 1 || !args.flags.count("--format")) {
        err << "casec render: expected one case file and --format dot|md\n" << kUsage;
        return kExitUsage;
    }
    const std::string& format = args.flags.at("--format");
    if (format != "dot" && format != "md") {
        err << "casec render: --format must be dot|md\n";
        return kExitUsage;
    }
    auto config = load_config(args, err);
    if (!config) return kExitUsage;
    auto c = load_case(args.positional[0], err);
    if (!c) return kExitUsage;

    std::string artifact;
    if (format == "dot") {
        artifact = to_dot(*c);
    } else {
        auto findings = validate(*c, *config);
        std::optional<Assessment> assessment;
        if (!has_errors(findings)) {
            AssessResult r = assess_binary(*c, *config);
            if (r.ok()) assessment = std::move(*r.value);
        }
        artifact = to_report(*c, findings, assessment ? &*assessment : nullptr);
    }
    if (args.flags.count("--out")) {
        if (!write_file(args.flags.at("--out"), artifact, err)) return kExitUsage;
    } else {
        out << artifact;
    }
    return kExitOk;
}

int cmd_ingest(const Args& args, std::ostream& out, std::ostream& err) {
    if (args.positional.size() != 1) {
        err << "casec ingest: expected exactly one runs file\n" << kUsage;
        return kExitUsage;
    }
    const std::string& path = args.positional[0];
    auto text = read_file(path, err);
    if (!text) return kExitUsage;
    RunFormat rf = path.ends_with(".csv") ? RunFormat::Csv : RunFormat::Jsonl;
    if (args.flags.count("--format")) {
        const std::string& f = args.flags.at("--format");
        if (f == "jsonl")
            rf = RunFormat::Jsonl;
        else if (f == "csv")
            rf = RunFormat::Csv;
        else {
            err << "casec ingest: --format must be jsonl|csv\n";
            return kExitUsage;
        }
    }
    double alpha = 0.05;
    if (args.flags.count("--alpha")) {
        try {
            alpha = std::stod(args.flags.at("--alpha"));
        } catch (...) {
            alpha = -1.0;
        }
        if (!(alpha > 0.0 && alpha < 1.0)) {
            err << "casec ingest: --alpha must be in (0,1)\n";
            return kExitUsage;
        }
    }
    RunParseResult runs = parse_runs({*text, path}, rf);
    print_diagnostics(path, runs.diagnostics, err);
    if (runs.records.empty()) return kExitUsage;
    if (has_switch(args, "--strict")) {
        auto dups = duplicate_runs(runs.records);
        if (!dups.empty()) {
            for (const auto& d : dups) err << "casec ingest: duplicate run: " << d << "\n";
            return kExitUsage;
        }
    }
    auto aggregates = aggregate(runs.records, alpha);
    if (has_switch(args, "--summary")) {
        out << "key n k rate lower upper (alpha " << format_real(alpha) << ")\n";
        for (const auto& agg : aggregates)
            out << to_string(agg.key) << " " << agg.n << " " << agg.k << " "
                << format_real(agg.rate) << " " << format_real(agg.lower_bound) << " "
                << format_real(agg.upper_bound) << "\n";
    } else {
        out << runs.records.size() << " records, " << aggregates.size()
            << " result sets (alpha " << format_real(alpha) << ")\n";
    }
    return kExitOk;
}

int cmd_init(const Args& args, std::ostream& out, std::ostream& err) {
    auto tmpl = args.flags.find("--template");
    if (tmpl == args.flags.end()) {
        err << "casec init: --template is required\n" << kUsage;
        return kExitUsage;
    }
    if (tmpl->second != "cyber-inability") {
        err << "casec init: unknown template \"" << tmpl->second << "\"\n";
        return kExitUsage;
    }
    std::string dir = args.flags.count("--out") ? args.flags.at("--out") : ".";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "casec init: cannot create " << dir << ": " << ec.message() << "\n";
        return kExitUsage;
    }

    TemplateParams params = default_template_params();
    TemplateResult tr = instantiate_template(params);
    if (!tr.ok()) {
        for (const auto& e : tr.errors) err << "casec init: " << e << "\n";
        return kExitUsage;
    }
    auto emit = [&](const std::string& name, const std::string& content) {
        std::string path = (fs::path(dir) / name).string();
        if (!write_file(path, content, err)) return false;
        out << path << "\n";
        return true;
    };
    if (!emit("cyber_inability.cae", serialize_case(*tr.value))) return kExitUsage;
    for (const auto& suite : params.suites)
        if (!emit(suite.suite_id + ".suite", serialize_suite(suite))) return kExitUsage;
    if (!emit("runs_baseline.jsonl", default_runs_fixture(false))) return kExitUsage;
    if (!emit("runs_adversarial.jsonl", default_runs_fixture(true))) return kExitUsage;
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << kUsage;
        return kExitUsage;
    }
    const std::string& command = args[0];
    Args parsed;
    if (!parse_args(args, 1, parsed, err)) return kExitUsage;
    if (command == "validate") return cmd_validate(parsed, out, err);
    if (command == "assess") return cmd_assess(parsed, out, err);
    if (command == "render") return cmd_render(parsed, out, err);
    if (command == "ingest") return cmd_ingest(parsed, out, err);
    if (command == "init") return cmd_init(parsed, out, err);
    err << "casec: unknown command \"" << command << "\"\n" << kUsage;
    return kExitUsage;
}

}  // namespace casec::cli
