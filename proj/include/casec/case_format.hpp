#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casec/case_model.hpp"
#include "casec/diagnostics.hpp"

namespace casec {

struct ParseResult {
    std::optional<SafetyCase> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value(); }
    bool has_errors() const {
        for (const auto& d : diagnostics)
            if (d.severity == Severity::Error) return true;
        return false;
    }
};

// Parse the line-oriented case language. Recovers after per-line errors so a
// document reports as many problems as possible in one pass. On success the
// returned case satisfies the construction invariants of build_case; the root
// is the canonically first claim that is neither an argument child nor a
// side-claim.
ParseResult parse_case(const SourceDocument& doc);

// Canonical text form: header, meta, claims, arguments, evidence, defeaters;
// each section in level-aware id order, attributes in fixed key order, LF
// line endings. Deterministic: byte-identical for equal cases.
std::string serialize_case(const SafetyCase& c);

// Canonical JSON document (two-space indent, LF, trailing newline).
std::string export_json(const SafetyCase& c);

struct ImportResult {
    std::optional<SafetyCase> value;
    std::vector<std::string> errors;

    bool ok() const { return value.has_value(); }
};

// Inverse of export_json.
ImportResult import_json(const std::string& json_text);

// Shortest decimal form used for confidences/strengths in text formats
// ("0.95", "1", "0.123456"); six decimal places.
std::string format_real(double v);

}  // namespace casec
