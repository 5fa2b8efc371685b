#include "casec/render.hpp"

#include <algorithm>
#include <sstream>

#include "casec/case_format.hpp"

namespace casec {

RenderStyle RenderStyle::defaults() {
    RenderStyle s;
    s.shapes = {{NodeKind::Claim, "box"},
                {NodeKind::Argument, "box"},
                {NodeKind::Evidence, "ellipse"},
                {NodeKind::Defeater, "octagon"}};
    s.status_fills = {{BinaryStatus::Substantiated, "palegreen"},
                      {BinaryStatus::Assumed, "lightgrey"},
                      {BinaryStatus::Undetermined, "khaki"},
                      {BinaryStatus::Unsubstantiated, "lightcoral"},
                      {BinaryStatus::OutOfScope, "white"}};
    return s;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

// Word-wrap at 36 columns for readable node labels.
std::string wrap_label(const std::string& text) {
    std::istringstream in(text);
    std::string word, line, out;
    while (in >> word) {
        if (!line.empty() && line.size() + 1 + word.size() > 36) {
            out += (out.empty() ? "" : "\n") + line;
            line.clear();
        }
        line += (line.empty() ? "" : " ") + word;
    }
    if (!line.empty()) out += (out.empty() ? "" : "\n") + line;
    return out;
}

struct DotNode {
    NodeId id;
    NodeKind kind;
};

std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') {
            out += "\\|";
            continue;
        }
        if (c == '\n') {
            out += ' ';
            continue;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string to_dot(const SafetyCase& c, const RenderStyle& style,
                   const Assessment* assessment) {
    std::vector<DotNode> nodes;
    for (const auto& n : c.claims) nodes.push_back({n.id, NodeKind::Claim});
    for (const auto& n : c.arguments) nodes.push_back({n.id, NodeKind::Argument});
    for (const auto& n : c.evidence) nodes.push_back({n.id, NodeKind::Evidence});
    for (const auto& n : c.defeaters) nodes.push_back({n.id, NodeKind::Defeater});
    std::sort(nodes.begin(), nodes.end(),
              [](const DotNode& a, const DotNode& b) { return canonical_id_less(a.id, b.id); });

    std::ostringstream out;
    out << "digraph \"" << dot_escape(c.title) << "\" {\n";
    out << "  rankdir=TB;\n";
    out << "  node [fontsize=10];\n";

    for (const auto& node : nodes) {
        std::string label = node.id.value;
        std::vector<std::string> style_parts;
        std::string fill;
        switch (node.kind) {
            case NodeKind::Claim: {
                const Claim* cl = c.find_claim(node.id);
                label += "\n" + wrap_label(cl->statement);
                if (cl->scope == Scope::OutOfScope) style_parts.push_back(style.out_of_scope_style);
                if (cl->is_assumption) fill = style.assumption_fill;
                if (assessment) {
                    auto it = assessment->statuses.find(node.id);
                    if (it != assessment->statuses.end()) {
                        auto fit = style.status_fills.find(it->second);
                        if (fit != style.status_fills.end()) fill = fit->second;
                        label += std::string("\n[") + to_string(it->second) + "]";
                    }
                    if (assessment->mode == Assessment::Mode::Confidence) {
                        auto cit = assessment->confidences.find(node.id);
                        if (cit != assessment->confidences.end())
                            label += "\np=" + format_real(cit->second);
                    }
                }
                break;
            }
            case NodeKind::Argument: {
                const Argument* a = c.find_argument(node.id);
                label += std::string("\n") + to_string(a->kind);
                style_parts.push_back("rounded");
                break;
            }
            case NodeKind::Evidence: {
                const Evidence* e = c.find_evidence(node.id);
                label += "\n" + wrap_label(e->description);
                break;
            }
            case NodeKind::Defeater: {
                const Defeater* d = c.find_defeater(node.id);
                label += "\n" + wrap_label(d->description);
                label += std::string("\n[") + to_string(d->status) + "]";
                break;
            }
        }
        if (!fill.empty()) style_parts.push_back("filled");
        out << "  \"" << dot_escape(node.id.value) << "\" [shape="
            << style.shapes.at(node.kind) << ", label=\"" << dot_escape(label) << "\"";
        if (!style_parts.empty()) {
            out << ", style=\"";
            for (size_t i = 0; i < style_parts.size(); ++i) {
                if (i) out << ",";
                out << style_parts[i];
            }
            out << "\"";
        }
        if (!fill.empty()) out << ", fillcolor=\"" << fill << "\"";
        out << "];\n";
    }

    auto edge = [&](const NodeId& from, const NodeId& to, const char* attrs) {
        out << "  \"" << dot_escape(from.value) << "\" -> \"" << dot_escape(to.value) << "\"";
        if (attrs && *attrs) out << " [" << attrs << "]";
        out << ";\n";
    };
    std::vector<const Argument*> args;
    for (const auto& a : c.arguments) args.push_back(&a);
    std::sort(args.begin(), args.end(),
              [](const Argument* a, const Argument* b) { return canonical_id_less(a->id, b->id); });
    for (const Argument* a : args) {
        edge(a->parent, a->id, "");
        for (const auto& ch : a->children) edge(a->id, ch, "");
        if (a->side) edge(a->id, *a->side, "style=dashed, label=\"side\"");
    }
    std::vector<const Evidence*> evs;
    for (const auto& e : c.evidence) evs.push_back(&e);
    std::sort(evs.begin(), evs.end(),
              [](const Evidence* a, const Evidence* b) { return canonical_id_less(a->id, b->id); });
    for (const Evidence* e : evs)
        for (const auto& s : e->supports) edge(s, e->id, "dir=back");
    std::vector<const Defeater*> defs;
    for (const auto& d : c.defeaters) defs.push_back(&d);
    std::sort(defs.begin(), defs.end(),
              [](const Defeater* a, const Defeater* b) { return canonical_id_less(a->id, b->id); });
    for (const Defeater* d : defs) edge(d->target, d->id, "style=dotted");

    out << "}\n";
    return out.str();
}

std::string to_report(const SafetyCase& c, const std::vector<RuleReport>& findings,
                      const Assessment* assessment) {
    std::ostringstream out;
    out << "# Safety case report: " << c.title << "\n\n";
    out << "- Version: " << c.version << "\n";
    out << "- Root: " << c.root.value << "\n";
    out << "- Nodes: " << c.node_count() << " (" << c.claims.size() << " claims, "
        << c.arguments.size() << " arguments, " << c.evidence.size() << " evidence, "
        << c.defeaters.size() << " defeaters)\n";
    for (const auto& [k, v] : c.meta)
        if (!k.starts_with("eval_binding.")) out << "- " << k << ": " << v << "\n";

    out << "\n## Validation findings\n\n";
    size_t errors = 0, warnings = 0, notes = 0;
    for (const auto& f : findings) {
        if (f.severity == Severity::Error) ++errors;
        if (f.severity == Severity::Warning) ++warnings;
        if (f.severity == Severity::Note) ++notes;
    }
    out << errors << " errors, " << warnings << " warnings, " << notes << " notes.\n";
    for (Severity sev : {Severity::Error, Severity::Warning, Severity::Note}) {
        bool any = false;
        for (const auto& f : findings) {
            if (f.severity != sev) continue;
            if (!any) {
                out << "\n### " << to_string(sev) << "s\n\n";
                any = true;
            }
            out << "- " << f.rule << " `" << f.subject.value << "`: " << f.message << "\n";
        }
    }

    out << "\n## Claims by level\n\n";
    out << "| Level | Claim | Scope | Result |\n";
    out << "|---|---|---|---|\n";
    std::vector<const Claim*> claims;
    for (const auto& cl : c.claims) claims.push_back(&cl);
    std::sort(claims.begin(), claims.end(),
              [](const Claim* a, const Claim* b) { return canonical_id_less(a->id, b->id); });
    for (const Claim* cl : claims) {
        auto shape = parse_id_shape(cl->id.value);
        std::string level = shape ? std::to_string(shape->level) : "-";
        std::string verdict = "-";
        if (assessment) {
            if (assessment->mode == Assessment::Mode::Binary) {
                auto it = assessment->statuses.find(cl->id);
                if (it != assessment->statuses.end()) verdict = to_string(it->second);
            } else {
                auto it = assessment->confidences.find(cl->id);
                if (it != assessment->confidences.end()) verdict = format_real(it->second);
            }
        }
        out << "| " << level << " | `" << cl->id.value << "` "
            << md_escape(cl->statement) << " | "
            << (cl->scope == Scope::OutOfScope ? "out" : "in") << " | " << verdict << " |\n";
    }

    out << "\n## Assumption load\n\n";
    std::vector<std::string> assumption_ids;
    for (const Claim* cl : claims)
        if (cl->is_assumption && !c.argument_of(cl->id) && c.evidence_for(cl->id).empty())
            assumption_ids.push_back(cl->id.value);
    if (assessment)
        out << "Verdict rests on " << assessment->root_assumption_load << " assumption(s).\n";
    if (assumption_ids.empty()) {
        out << "No bare assumptions in the case.\n";
    } else {
        out << "Bare assumptions:";
        for (const auto& id : assumption_ids) out << " `" << id << "`";
        out << "\n";
    }

    out << "\n## Defeater register\n\n";
    if (c.defeaters.empty()) {
        out << "No defeaters recorded.\n";
    } else {
        out << "| Defeater | Target | Status | Strength | Effectiveness | Mitigation |\n";
        out << "|---|---|---|---|---|---|\n";
        std::vector<const Defeater*> defs;
        for (const auto& d : c.defeaters) defs.push_back(&d);
        std::sort(defs.begin(), defs.end(), [](const Defeater* a, const Defeater* b) {
            return canonical_id_less(a->id, b->id);
        });
        for (const Defeater* d : defs)
            out << "| `" << d->id.value << "` | `" << d->target.value << "` | "
                << to_string(d->status) << " | " << format_real(d->strength) << " | "
                << format_real(d->mitigation_effectiveness) << " | "
                << (d->mitigation ? md_escape(*d->mitigation) : std::string("-")) << " |\n";
    }

    out << "\n## Verdict\n\n";
    if (!assessment) {
        out << "Not assessed.\n";
    } else if (assessment->mode == Assessment::Mode::Binary) {
        out << "Root `" << c.root.value << "`: " << to_string(assessment->root_status)
            << " (assumption load " << assessment->root_assumption_load << ").\n";
    } else if (assessment->root_confidence) {
        out << "Root `" << c.root.value
            << "` confidence: " << format_real(*assessment->root_confidence)
            << " (assumption load " << assessment->root_assumption_load << ").\n";
    } else {
        out << "Root `" << c.root.value << "`: no confidence computed.\n";
    }
    for (const auto& w : assessment ? assessment->warnings : std::vector<std::string>{})
        out << "\n> " << w << "\n";
    return out.str();
}

}  // namespace casec
