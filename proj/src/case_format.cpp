#include "casec/case_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace casec {

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

namespace {

// ---------------------------------------------------------------------------
// Line scanner

struct LineScanner {
    std::string_view text;
    int line = 1;
    size_t pos = 0;

    int column() const { return int(pos) + 1; }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
};

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' ||
           c == '+' || c == '/';
}

// Attribute values additionally admit ',' so facet lists stay one token.
bool is_value_char(char c) { return is_word_char(c) || c == ','; }

struct ParserState {
    std::vector<Diagnostic> diags;
    bool line_failed = false;

    void error(int line, int col, const char* code, std::string msg) {
        diags.push_back({Severity::Error, line, col, code, std::move(msg)});
    }
    void fail(int line, int col, const char* code, std::string msg) {
        error(line, col, code, std::move(msg));
        line_failed = true;
    }
};

std::optional<std::string> read_word(LineScanner& sc, ParserState& st, const char* what) {
    sc.skip_ws();
    int col = sc.column();
    size_t start = sc.pos;
    while (sc.pos < sc.text.size() && is_word_char(sc.text[sc.pos])) ++sc.pos;
    if (sc.pos == start) {
        st.fail(sc.line, col, "P003", std::string("expected ") + what);
        return std::nullopt;
    }
    return std::string(sc.text.substr(start, sc.pos - start));
}

std::optional<std::string> read_string(LineScanner& sc, ParserState& st, const char* what) {
    sc.skip_ws();
    int col = sc.column();
    if (sc.peek() != '"') {
        st.fail(sc.line, col, "P003", std::string("expected quoted string for ") + what);
        return std::nullopt;
    }
    ++sc.pos;
    std::string out;
    while (sc.pos < sc.text.size()) {
        char c = sc.text[sc.pos++];
        if (c == '"') return out;
        if (c == '\\' && sc.pos < sc.text.size()) {
            char esc = sc.text[sc.pos++];
            switch (esc) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                default:
                    st.fail(sc.line, int(sc.pos) - 1, "P003",
                            std::string("unknown escape \\") + esc);
                    return std::nullopt;
            }
            continue;
        }
        out.push_back(c);
    }
    st.fail(sc.line, col, "P003", "unterminated string");
    return std::nullopt;
}

std::optional<std::vector<std::string>> read_id_list(LineScanner& sc, ParserState& st,
                                                     const char* what) {
    sc.skip_ws();
    int col = sc.column();
    if (sc.peek() != '[') {
        st.fail(sc.line, col, "P003", std::string("expected [id,...] for ") + what);
        return std::nullopt;
    }
    ++sc.pos;
    std::vector<std::string> out;
    for (;;) {
        sc.skip_ws();
        if (sc.peek() == ']') {
            ++sc.pos;
            return out;
        }
        auto word = read_word(sc, st, "id in list");
        if (!word) return std::nullopt;
        out.push_back(std::move(*word));
        sc.skip_ws();
        if (sc.peek() == ',') {
            ++sc.pos;
            continue;
        }
        if (sc.peek() == ']') {
            ++sc.pos;
            return out;
        }
        st.fail(sc.line, sc.column(), "P003", "expected ',' or ']' in id list");
        return std::nullopt;
    }
}

std::optional<double> parse_real(const std::string& tok, LineScanner& sc, ParserState& st,
                                 int col, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        st.fail(sc.line, col, "P003", std::string("malformed number for ") + what);
        return std::nullopt;
    }
    return v;
}

// One raw attribute after the positional part of a statement: a bare flag
// ("assumption") or key=value where value is a string, id list or token.
struct Attr {
    std::string key;
    int col = 1;
    std::optional<std::string> token;
    std::optional<std::string> string;
    std::optional<std::vector<std::string>> list;

    bool is_flag() const { return !token && !string && !list; }
};

std::optional<Attr> read_attr(LineScanner& sc, ParserState& st) {
    sc.skip_ws();
    Attr attr;
    attr.col = sc.column();
    auto key = read_word(sc, st, "attribute");
    if (!key) return std::nullopt;
    attr.key = std::move(*key);
    sc.skip_ws();
    if (sc.peek() != '=') return attr;  // bare flag
    ++sc.pos;
    sc.skip_ws();
    if (sc.peek() == '"') {
        auto s = read_string(sc, st, attr.key.c_str());
        if (!s) return std::nullopt;
        attr.string = std::move(*s);
    } else if (sc.peek() == '[') {
        auto l = read_id_list(sc, st, attr.key.c_str());
        if (!l) return std::nullopt;
        attr.list = std::move(*l);
    } else {
        sc.skip_ws();
        int col = sc.column();
        size_t start = sc.pos;
        while (sc.pos < sc.text.size() && is_value_char(sc.text[sc.pos])) ++sc.pos;
        if (sc.pos == start) {
            st.fail(sc.line, col, "P003", "expected value for " + attr.key);
            return std::nullopt;
        }
        attr.token = std::string(sc.text.substr(start, sc.pos - start));
    }
    return attr;
}

struct PendingRef {
    NodeId from;
    NodeId to;
    int line;
    int col;
    enum class Expect { Claim, AnyNonDefeater } expect;
    std::string role;
};

std::optional<EvidenceTaxonomy> parse_taxonomy(const std::string& tok, LineScanner& sc,
                                               ParserState& st, int col) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : tok) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4) {
        st.fail(sc.line, col, "P003", "taxonomy needs exactly four facets");
        return std::nullopt;
    }
    EvidenceTaxonomy t;
    bool ok = true;
    if (parts[0] == "qualitative")
        t.form = EvidenceTaxonomy::Form::Qualitative;
    else if (parts[0] == "quantitative")
        t.form = EvidenceTaxonomy::Form::Quantitative;
    else
        ok = false;
    if (parts[1] == "technical")
        t.channel = EvidenceTaxonomy::Channel::Technical;
    else if (parts[1] == "social")
        t.channel = EvidenceTaxonomy::Channel::Social;
    else
        ok = false;
    if (parts[2] == "theoretical")
        t.basis = EvidenceTaxonomy::Basis::Theoretical;
    else if (parts[2] == "empirical")
        t.basis = EvidenceTaxonomy::Basis::Empirical;
    else if (parts[2] == "subjective")
        t.basis = EvidenceTaxonomy::Basis::Subjective;
    else
        ok = false;
    if (parts[3] == "internal")
        t.origin = EvidenceTaxonomy::Origin::Internal;
    else if (parts[3] == "external")
        t.origin = EvidenceTaxonomy::Origin::External;
    else
        ok = false;
    if (!ok) {
        st.fail(sc.line, col, "P003", "unknown taxonomy facet in \"" + tok + "\"");
        return std::nullopt;
    }
    return t;
}

std::string escape_string(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

const char* taxonomy_form(const EvidenceTaxonomy& t) {
    return t.form == EvidenceTaxonomy::Form::Qualitative ? "qualitative" : "quantitative";
}
const char* taxonomy_channel(const EvidenceTaxonomy& t) {
    return t.channel == EvidenceTaxonomy::Channel::Technical ? "technical" : "social";
}
const char* taxonomy_basis(const EvidenceTaxonomy& t) {
    switch (t.basis) {
        case EvidenceTaxonomy::Basis::Theoretical: return "theoretical";
        case EvidenceTaxonomy::Basis::Empirical: return "empirical";
        default: return "subjective";
    }
}
const char* taxonomy_origin(const EvidenceTaxonomy& t) {
    return t.origin == EvidenceTaxonomy::Origin::Internal ? "internal" : "external";
}

}  // namespace

ParseResult parse_case(const SourceDocument& doc) {
    ParseResult result;
    ParserState st;

    NodeDeclarations decls;
    bool saw_header = false;
    bool saw_statement = false;
    std::unordered_map<NodeId, int> decl_line;  // first declaration per id
    std::vector<PendingRef> refs;

    // Split into lines, tolerate CRLF.
    std::vector<std::string_view> lines;
    {
        std::string_view text = doc.text;
        size_t start = 0;
        while (start <= text.size()) {
            size_t nl = text.find('\n', start);
            std::string_view ln = nl == std::string_view::npos
                                      ? text.substr(start)
                                      : text.substr(start, nl - start);
            if (!ln.empty() && ln.back() == '\r') ln.remove_suffix(1);
            lines.push_back(ln);
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
    }

    auto record_id = [&](const NodeId& id, int line, int col) {
        auto [it, inserted] = decl_line.emplace(id, line);
        if (!inserted)
            st.error(line, col, "P004",
                     "duplicate id \"" + id.value + "\" (first declared on line " +
                         std::to_string(it->second) + ")");
        return inserted;
    };

    for (size_t i = 0; i < lines.size(); ++i) {
        LineScanner sc{lines[i], int(i) + 1, 0};
        st.line_failed = false;
        sc.skip_ws();
        if (sc.pos >= sc.text.size() || sc.peek() == '#') continue;

        int kw_col = sc.column();
        auto kw = read_word(sc, st, "statement keyword");
        if (!kw) continue;
        saw_statement = true;

        if (*kw == "case") {
            if (saw_header) {
                st.error(sc.line, kw_col, "P003", "duplicate case header");
                continue;
            }
            auto title = read_string(sc, st, "case title");
            if (!title) continue;
            auto kw2 = read_word(sc, st, "\"version\"");
            if (!kw2) continue;
            if (*kw2 != "version") {
                st.error(sc.line, kw_col, "P003", "expected \"version\" after case title");
                continue;
            }
            sc.skip_ws();
            int vcol = sc.column();
            auto vtok = read_word(sc, st, "version number");
            if (!vtok) continue;
            int version = 0;
            auto [p, ec] = std::from_chars(vtok->data(), vtok->data() + vtok->size(), version);
            if (ec != std::errc{} || p != vtok->data() + vtok->size()) {
                st.error(sc.line, vcol, "P003", "version must be an integer");
                continue;
            }
            decls.title = std::move(*title);
            decls.version = version;
            saw_header = true;
            continue;
        }

        if (!saw_header) {
            st.error(sc.line, kw_col, "P003", "first statement must be the case header");
            // keep parsing so later problems still surface
            saw_header = true;  // only report once
        }

        if (*kw == "meta") {
            auto key = read_word(sc, st, "meta key");
            if (!key) continue;
            sc.skip_ws();
            if (sc.peek() != '=') {
                st.error(sc.line, sc.column(), "P003", "expected '=' after meta key");
                continue;
            }
            ++sc.pos;
            auto value = read_string(sc, st, "meta value");
            if (!value) continue;
            if (decls.meta.count(*key))
                result.diagnostics.push_back({Severity::Warning, sc.line, kw_col, "P007",
                                              "meta key \"" + *key + "\" redefined"});
            decls.meta[*key] = std::move(*value);
            continue;
        }

        if (*kw == "claim") {
            sc.skip_ws();
            int id_col = sc.column();
            auto id = read_word(sc, st, "claim id");
            if (!id) continue;
            auto statement = read_string(sc, st, "claim statement");
            if (!statement) continue;
            Claim cl;
            cl.id = NodeId(*id);
            cl.statement = std::move(*statement);
            bool bad = false;
            while (!sc.eof() && !bad) {
                auto attr = read_attr(sc, st);
                if (!attr) {
                    bad = true;
                    break;
                }
                if (attr->key == "scope" && attr->token) {
                    if (*attr->token == "in")
                        cl.scope = Scope::InScope;
                    else if (*attr->token == "out")
                        cl.scope = Scope::OutOfScope;
                    else {
                        st.fail(sc.line, attr->col, "P003", "scope must be in|out");
                        bad = true;
                    }
                } else if (attr->key == "assumption" && attr->is_flag()) {
                    cl.is_assumption = true;
                } else if (attr->key == "side" && attr->is_flag()) {
                    cl.is_side_claim = true;
                } else if (attr->key == "conf" && attr->token) {
                    auto v = parse_real(*attr->token, sc, st, attr->col, "conf");
                    if (!v) {
                        bad = true;
                        break;
                    }
                    cl.leaf_confidence = *v;
                } else if (attr->key == "risk_model" && attr->string) {
                    cl.risk_model = std::move(*attr->string);
                } else {
                    st.fail(sc.line, attr->col, "P003",
                            "unknown or malformed claim attribute \"" + attr->key + "\"");
                    bad = true;
                }
            }
            if (bad) continue;
            if (record_id(cl.id, sc.line, id_col)) decls.claims.push_back(std::move(cl));
            continue;
        }

        if (*kw == "argument") {
            sc.skip_ws();
            int id_col = sc.column();
            auto id = read_word(sc, st, "argument id");
            if (!id) continue;
            Argument arg;
            arg.id = NodeId(*id);
            bool saw_kind = false, saw_parent = false, saw_children = false, bad = false;
            while (!sc.eof() && !bad) {
                auto attr = read_attr(sc, st);
                if (!attr) {
                    bad = true;
                    break;
                }
                if (attr->key == "kind" && attr->token) {
                    if (*attr->token == "decomposition")
                        arg.kind = ArgumentKind::Decomposition;
                    else if (*attr->token == "substitution")
                        arg.kind = ArgumentKind::Substitution;
                    else {
                        st.fail(sc.line, attr->col, "P003",
                                "kind must be decomposition|substitution");
                        bad = true;
                        break;
                    }
                    saw_kind = true;
                } else if (attr->key == "parent" && attr->token) {
                    arg.parent = NodeId(*attr->token);
                    refs.push_back({arg.id, arg.parent, sc.line, attr->col,
                                    PendingRef::Expect::Claim, "parent"});
                    saw_parent = true;
                } else if (attr->key == "children" && attr->list) {
                    for (auto& chid : *attr->list) {
                        arg.children.push_back(NodeId(chid));
                        refs.push_back({arg.id, NodeId(chid), sc.line, attr->col,
                                        PendingRef::Expect::Claim, "child"});
                    }
                    saw_children = true;
                } else if (attr->key == "side" && attr->token) {
                    arg.side = NodeId(*attr->token);
                    refs.push_back({arg.id, *arg.side, sc.line, attr->col,
                                    PendingRef::Expect::Claim, "side"});
                } else if (attr->key == "rationale" && attr->string) {
                    arg.rationale = std::move(*attr->string);
                } else {
                    st.fail(sc.line, attr->col, "P003",
                            "unknown or malformed argument attribute \"" + attr->key + "\"");
                    bad = true;
                }
            }
            if (bad) continue;
            if (!saw_kind || !saw_parent || !saw_children) {
                st.error(sc.line, kw_col, "P003",
                         "argument requires kind=, parent= and children=");
                continue;
            }
            if (record_id(arg.id, sc.line, id_col)) decls.arguments.push_back(std::move(arg));
            continue;
        }

        if (*kw == "evidence") {
            sc.skip_ws();
            int id_col = sc.column();
            auto id = read_word(sc, st, "evidence id");
            if (!id) continue;
            auto desc = read_string(sc, st, "evidence description");
            if (!desc) continue;
            Evidence ev;
            ev.id = NodeId(*id);
            ev.description = std::move(*desc);
            bool saw_supports = false, bad = false;
            while (!sc.eof() && !bad) {
                auto attr = read_attr(sc, st);
                if (!attr) {
                    bad = true;
                    break;
                }
                if (attr->key == "supports" && attr->list) {
                    for (auto& sid : *attr->list) {
                        ev.supports.push_back(NodeId(sid));
                        refs.push_back({ev.id, NodeId(sid), sc.line, attr->col,
                                        PendingRef::Expect::Claim, "supports"});
                    }
                    saw_supports = true;
                } else if (attr->key == "taxonomy" && attr->token) {
                    auto t = parse_taxonomy(*attr->token, sc, st, attr->col);
                    if (!t) {
                        bad = true;
                        break;
                    }
                    ev.taxonomy = *t;
                } else if (attr->key == "payload" && attr->string) {
                    ev.payload = std::move(*attr->string);
                } else if (attr->key == "verdict" && attr->token) {
                    if (*attr->token == "supports")
                        ev.verdict = EvidenceVerdict::Supports;
                    else if (*attr->token == "refutes")
                        ev.verdict = EvidenceVerdict::Refutes;
                    else if (*attr->token == "inconclusive")
                        ev.verdict = EvidenceVerdict::Inconclusive;
                    else {
                        st.fail(sc.line, attr->col, "P003",
                                "verdict must be supports|refutes|inconclusive");
                        bad = true;
                        break;
                    }
                } else if (attr->key == "conf" && attr->token) {
                    auto v = parse_real(*attr->token, sc, st, attr->col, "conf");
                    if (!v) {
                        bad = true;
                        break;
                    }
                    ev.verdict_confidence = *v;
                } else {
                    st.fail(sc.line, attr->col, "P003",
                            "unknown or malformed evidence attribute \"" + attr->key + "\"");
                    bad = true;
                }
            }
            if (bad) continue;
            if (!saw_supports) {
                st.error(sc.line, kw_col, "P003", "evidence requires supports=[...]");
                continue;
            }
            if (record_id(ev.id, sc.line, id_col)) decls.evidence.push_back(std::move(ev));
            continue;
        }

        if (*kw == "defeater") {
            sc.skip_ws();
            int id_col = sc.column();
            auto id = read_word(sc, st, "defeater id");
            if (!id) continue;
            auto desc = read_string(sc, st, "defeater description");
            if (!desc) continue;
            Defeater df;
            df.id = NodeId(*id);
            df.description = std::move(*desc);
            bool saw_target = false, saw_status = false, bad = false;
            while (!sc.eof() && !bad) {
                auto attr = read_attr(sc, st);
                if (!attr) {
                    bad = true;
                    break;
                }
                if (attr->key == "target" && attr->token) {
                    df.target = NodeId(*attr->token);
                    refs.push_back({df.id, df.target, sc.line, attr->col,
                                    PendingRef::Expect::AnyNonDefeater, "target"});
                    saw_target = true;
                } else if (attr->key == "status" && attr->token) {
                    if (*attr->token == "unmitigated")
                        df.status = DefeaterStatus::Unmitigated;
                    else if (*attr->token == "mitigated")
                        df.status = DefeaterStatus::Mitigated;
                    else if (*attr->token == "accepted")
                        df.status = DefeaterStatus::AcceptedResidual;
                    else {
                        st.fail(sc.line, attr->col, "P003",
                                "status must be unmitigated|mitigated|accepted");
                        bad = true;
                        break;
                    }
                    saw_status = true;
                } else if (attr->key == "mitigation" && attr->string) {
                    df.mitigation = std::move(*attr->string);
                } else if (attr->key == "strength" && attr->token) {
                    auto v = parse_real(*attr->token, sc, st, attr->col, "strength");
                    if (!v) {
                        bad = true;
                        break;
                    }
                    df.strength = *v;
                } else if (attr->key == "effectiveness" && attr->token) {
                    auto v = parse_real(*attr->token, sc, st, attr->col, "effectiveness");
                    if (!v) {
                        bad = true;
                        break;
                    }
                    df.mitigation_effectiveness = *v;
                } else {
                    st.fail(sc.line, attr->col, "P003",
                            "unknown or malformed defeater attribute \"" + attr->key + "\"");
                    bad = true;
                }
            }
            if (bad) continue;
            if (!saw_target || !saw_status) {
                st.error(sc.line, kw_col, "P003", "defeater requires target= and status=");
                continue;
            }
            if (record_id(df.id, sc.line, id_col)) decls.defeaters.push_back(std::move(df));
            continue;
        }

        st.error(sc.line, kw_col, "P002", "unknown statement keyword \"" + *kw + "\"");
    }

    if (!saw_statement) {
        st.error(1, 1, "P001", "empty document");
        result.diagnostics.insert(result.diagnostics.end(), st.diags.begin(), st.diags.end());
        return result;
    }

    // Resolve references at the referencing line.
    std::unordered_set<NodeId> claim_ids, nondefeater_ids;
    for (const auto& cl : decls.claims) claim_ids.insert(cl.id);
    for (const auto& cl : decls.claims) nondefeater_ids.insert(cl.id);
    for (const auto& a : decls.arguments) nondefeater_ids.insert(a.id);
    for (const auto& e : decls.evidence) nondefeater_ids.insert(e.id);
    for (const auto& r : refs) {
        bool ok = r.expect == PendingRef::Expect::Claim ? claim_ids.count(r.to) > 0
                                                        : nondefeater_ids.count(r.to) > 0;
        if (!ok)
            st.error(r.line, r.col, "P005",
                     r.role + " reference \"" + r.to.value + "\" of \"" + r.from.value +
                         "\" does not resolve" +
                         (r.expect == PendingRef::Expect::Claim ? " to a claim" : ""));
    }

    result.diagnostics.insert(result.diagnostics.end(), st.diags.begin(), st.diags.end());
    if (result.has_errors()) return result;

    // Root inference: canonically first claim that is neither a child nor a side.
    std::unordered_set<NodeId> attached;
    for (const auto& a : decls.arguments) {
        for (const auto& ch : a.children) attached.insert(ch);
        if (a.side) attached.insert(*a.side);
    }
    std::optional<NodeId> root;
    for (const auto& cl : decls.claims) {
        if (attached.count(cl.id)) continue;
        if (!root || canonical_id_less(cl.id, *root)) root = cl.id;
    }
    if (!root) {
        result.diagnostics.push_back(
            {Severity::Error, 1, 1, "P006",
             "no root claim: every claim is attached to an argument"});
        return result;
    }

    BuildResult built = build_case(std::move(decls), *root);
    if (!built.ok()) {
        for (const auto& be : built.errors) {
            auto it = decl_line.find(be.subject);
            int line = it == decl_line.end() ? 1 : it->second;
            const char* code = be.code == BuildErrorCode::DuplicateId        ? "P004"
                               : be.code == BuildErrorCode::DanglingReference ? "P005"
                                                                              : "P006";
            result.diagnostics.push_back({Severity::Error, line, 1, code, be.message});
        }
        return result;
    }
    result.value = std::move(built.value);
    return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

template <typename T>
std::vector<const T*> canonical(const std::vector<T>& nodes) {
    std::vector<const T*> out;
    out.reserve(nodes.size());
    for (const auto& n : nodes) out.push_back(&n);
    std::sort(out.begin(), out.end(),
              [](const T* a, const T* b) { return canonical_id_less(a->id, b->id); });
    return out;
}

}  // namespace

std::string serialize_case(const SafetyCase& c) {
    std::ostringstream out;
    out << "case \"" << escape_string(c.title) << "\" version " << c.version << "\n";
    for (const auto& [k, v] : c.meta)
        out << "meta " << k << " = \"" << escape_string(v) << "\"\n";

    auto section_break = [&] { out << "\n"; };

    if (!c.claims.empty()) section_break();
    for (const Claim* cl : canonical(c.claims)) {
        out << "claim " << cl->id.value << " \"" << escape_string(cl->statement) << "\"";
        if (cl->scope == Scope::OutOfScope) out << " scope=out";
        if (cl->is_assumption) out << " assumption";
        if (cl->is_side_claim) out << " side";
        if (cl->leaf_confidence) out << " conf=" << format_real(*cl->leaf_confidence);
        if (cl->risk_model) out << " risk_model=\"" << escape_string(*cl->risk_model) << "\"";
        out << "\n";
    }

    if (!c.arguments.empty()) section_break();
    for (const Argument* a : canonical(c.arguments)) {
        out << "argument " << a->id.value << " kind=" << to_string(a->kind)
            << " parent=" << a->parent.value << " children=[";
        for (size_t i = 0; i < a->children.size(); ++i) {
            if (i) out << ",";
            out << a->children[i].value;
        }
        out << "]";
        if (a->side) out << " side=" << a->side->value;
        if (a->rationale) out << " rationale=\"" << escape_string(*a->rationale) << "\"";
        out << "\n";
    }

    if (!c.evidence.empty()) section_break();
    for (const Evidence* e : canonical(c.evidence)) {
        out << "evidence " << e->id.value << " \"" << escape_string(e->description)
            << "\" supports=[";
        for (size_t i = 0; i < e->supports.size(); ++i) {
            if (i) out << ",";
            out << e->supports[i].value;
        }
        out << "]";
        if (e->taxonomy)
            out << " taxonomy=" << taxonomy_form(*e->taxonomy) << ","
                << taxonomy_channel(*e->taxonomy) << "," << taxonomy_basis(*e->taxonomy) << ","
                << taxonomy_origin(*e->taxonomy);
        if (e->payload) out << " payload=\"" << escape_string(*e->payload) << "\"";
        if (e->verdict != EvidenceVerdict::Inconclusive)
            out << " verdict=" << to_string(e->verdict);
        if (e->verdict_confidence) out << " conf=" << format_real(*e->verdict_confidence);
        out << "\n";
    }

    if (!c.defeaters.empty()) section_break();
    for (const Defeater* d : canonical(c.defeaters)) {
        out << "defeater " << d->id.value << " \"" << escape_string(d->description)
            << "\" target=" << d->target.value << " status=" << to_string(d->status);
        if (d->mitigation) out << " mitigation=\"" << escape_string(*d->mitigation) << "\"";
        if (d->strength != 1.0) out << " strength=" << format_real(d->strength);
        if (d->mitigation_effectiveness != 0.0)
            out << " effectiveness=" << format_real(d->mitigation_effectiveness);
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON export / import

using ordered_json = nlohmann::ordered_json;

std::string export_json(const SafetyCase& c) {
    ordered_json j;
    j["title"] = c.title;
    j["version"] = c.version;
    j["meta"] = ordered_json::object();
    for (const auto& [k, v] : c.meta) j["meta"][k] = v;

    j["claims"] = ordered_json::array();
    for (const Claim* cl : canonical(c.claims)) {
        ordered_json o;
        o["id"] = cl->id.value;
        o["statement"] = cl->statement;
        o["scope"] = cl->scope == Scope::OutOfScope ? "out" : "in";
        o["assumption"] = cl->is_assumption;
        o["side"] = cl->is_side_claim;
        if (cl->leaf_confidence) o["conf"] = *cl->leaf_confidence;
        if (cl->risk_model) o["risk_model"] = *cl->risk_model;
        j["claims"].push_back(std::move(o));
    }

    j["arguments"] = ordered_json::array();
    for (const Argument* a : canonical(c.arguments)) {
        ordered_json o;
        o["id"] = a->id.value;
        o["kind"] = to_string(a->kind);
        o["parent"] = a->parent.value;
        o["children"] = ordered_json::array();
        for (const auto& ch : a->children) o["children"].push_back(ch.value);
        if (a->side) o["side"] = a->side->value;
        if (a->rationale) o["rationale"] = *a->rationale;
        j["arguments"].push_back(std::move(o));
    }

    j["evidence"] = ordered_json::array();
    for (const Evidence* e : canonical(c.evidence)) {
        ordered_json o;
        o["id"] = e->id.value;
        o["description"] = e->description;
        o["supports"] = ordered_json::array();
        for (const auto& s : e->supports) o["supports"].push_back(s.value);
        if (e->taxonomy)
            o["taxonomy"] = {taxonomy_form(*e->taxonomy), taxonomy_channel(*e->taxonomy),
                             taxonomy_basis(*e->taxonomy), taxonomy_origin(*e->taxonomy)};
        if (e->payload) o["payload"] = *e->payload;
        o["verdict"] = to_string(e->verdict);
        if (e->verdict_confidence) o["conf"] = *e->verdict_confidence;
        j["evidence"].push_back(std::move(o));
    }

    j["defeaters"] = ordered_json::array();
    for (const Defeater* d : canonical(c.defeaters)) {
        ordered_json o;
        o["id"] = d->id.value;
        o["description"] = d->description;
        o["target"] = d->target.value;
        o["status"] = to_string(d->status);
        if (d->mitigation) o["mitigation"] = *d->mitigation;
        o["strength"] = d->strength;
        o["effectiveness"] = d->mitigation_effectiveness;
        j["defeaters"].push_back(std::move(o));
    }

    j["root"] = c.root.value;
    return j.dump(2) + "\n";
}

ImportResult import_json(const std::string& json_text) {
    ImportResult result;
    ordered_json j = ordered_json::parse(json_text, nullptr, false);
    if (j.is_discarded()) {
        result.errors.push_back("not valid JSON");
        return result;
    }
    try {
        NodeDeclarations decls;
        decls.title = j.at("title").get<std::string>();
        decls.version = j.at("version").get<int>();
        if (j.contains("meta"))
            for (auto& [k, v] : j.at("meta").items())
                decls.meta[k] = v.get<std::string>();
        for (const auto& o : j.value("claims", ordered_json::array())) {
            Claim cl;
            cl.id = NodeId(o.at("id").get<std::string>());
            cl.statement = o.at("statement").get<std::string>();
            cl.scope = o.value("scope", "in") == std::string("out") ? Scope::OutOfScope
                                                                    : Scope::InScope;
            cl.is_assumption = o.value("assumption", false);
            cl.is_side_claim = o.value("side", false);
            if (o.contains("conf")) cl.leaf_confidence = o.at("conf").get<double>();
            if (o.contains("risk_model"))
                cl.risk_model = o.at("risk_model").get<std::string>();
            decls.claims.push_back(std::move(cl));
        }
        for (const auto& o : j.value("arguments", ordered_json::array())) {
            Argument a;
            a.id = NodeId(o.at("id").get<std::string>());
            a.kind = o.at("kind").get<std::string>() == "substitution"
                         ? ArgumentKind::Substitution
                         : ArgumentKind::Decomposition;
            a.parent = NodeId(o.at("parent").get<std::string>());
            for (const auto& ch : o.at("children")) a.children.push_back(NodeId(ch.get<std::string>()));
            if (o.contains("side")) a.side = NodeId(o.at("side").get<std::string>());
            if (o.contains("rationale")) a.rationale = o.at("rationale").get<std::string>();
            decls.arguments.push_back(std::move(a));
        }
        for (const auto& o : j.value("evidence", ordered_json::array())) {
            Evidence e;
            e.id = NodeId(o.at("id").get<std::string>());
            e.description = o.at("description").get<std::string>();
            for (const auto& s : o.at("supports")) e.supports.push_back(NodeId(s.get<std::string>()));
            if (o.contains("taxonomy")) {
                const auto& t = o.at("taxonomy");
                std::string tok = t.at(0).get<std::string>() + "," + t.at(1).get<std::string>() +
                                  "," + t.at(2).get<std::string>() + "," +
                                  t.at(3).get<std::string>();
                LineScanner sc{tok, 1, 0};
                ParserState st;
                auto parsed = parse_taxonomy(tok, sc, st, 1);
                if (!parsed) {
                    result.errors.push_back("bad taxonomy for " + e.id.value);
                    return result;
                }
                e.taxonomy = *parsed;
            }
            if (o.contains("payload")) e.payload = o.at("payload").get<std::string>();
            std::string v = o.value("verdict", "inconclusive");
            e.verdict = v == "supports"  ? EvidenceVerdict::Supports
                        : v == "refutes" ? EvidenceVerdict::Refutes
                                         : EvidenceVerdict::Inconclusive;
            if (o.contains("conf")) e.verdict_confidence = o.at("conf").get<double>();
            decls.evidence.push_back(std::move(e));
        }
        for (const auto& o : j.value("defeaters", ordered_json::array())) {
            Defeater d;
            d.id = NodeId(o.at("id").get<std::string>());
            d.description = o.at("description").get<std::string>();
            d.target = NodeId(o.at("target").get<std::string>());
            std::string s = o.at("status").get<std::string>();
            d.status = s == "mitigated"  ? DefeaterStatus::Mitigated
                       : s == "accepted" ? DefeaterStatus::AcceptedResidual
                                         : DefeaterStatus::Unmitigated;
            if (o.contains("mitigation")) d.mitigation = o.at("mitigation").get<std::string>();
            d.strength = o.value("strength", 1.0);
            d.mitigation_effectiveness = o.value("effectiveness", 0.0);
            decls.defeaters.push_back(std::move(d));
        }
        NodeId root(j.at("root").get<std::string>());
        BuildResult built = build_case(std::move(decls), root);
        if (!built.ok()) {
            for (const auto& be : built.errors) result.errors.push_back(be.message);
            return result;
        }
        result.value = std::move(built.value);
    } catch (const std::exception& e) {
        result.errors.push_back(e.what());
    }
    return result;
}

}  // namespace casec
