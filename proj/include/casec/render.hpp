#pragma once

#include <map>
#include <string>
#include <vector>

#include "casec/assessment.hpp"
#include "casec/case_model.hpp"
#include "casec/validation.hpp"

namespace casec {

// Shapes follow the convention: claims are rectangles, arguments rounded
// boxes, evidence ellipses, defeaters octagons. Out-of-scope nodes get dashed
// borders, assumptions a grey fill; an assessment adds status colours.
struct RenderStyle {
    std::map<NodeKind, std::string> shapes;
    std::string out_of_scope_style = "dashed";
    std::string assumption_fill = "lightgrey";
    std::map<BinaryStatus, std::string> status_fills;

    static RenderStyle defaults();
};

// Valid DOT digraph: every node and edge exactly once, nodes in canonical id
// order, byte-identical across runs.
std::string to_dot(const SafetyCase& c, const RenderStyle& style = RenderStyle::defaults(),
                   const Assessment* assessment = nullptr);

// Markdown report: summary, findings by severity, per-level claim table,
// assumption load, defeater register, verdict.
std::string to_report(const SafetyCase& c, const std::vector<RuleReport>& findings,
                      const Assessment* assessment = nullptr);

}  // namespace casec
