#pragma once

#include <optional>
#include <string>

namespace casec {

enum class Severity { Error, Warning, Note };

const char* to_string(Severity s);

// Position-carrying finding from a text-format parser. Codes are a stable
// contract:
//   P001 empty document          P002 unknown statement keyword
//   P003 malformed statement     P004 duplicate id
//   P005 unresolved reference    P006 structural violation
//   P007 duplicate meta key (warning)
struct Diagnostic {
    Severity severity = Severity::Error;
    int line = 1;
    int column = 1;
    std::string code;
    std::string message;
};

struct SourceDocument {
    std::string text;
    std::optional<std::string> origin;
};

}  // namespace casec
