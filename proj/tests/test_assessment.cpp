#include <doctest.h>

#include <cmath>

#include "casec/assessment.hpp"
#include "casec/case_format.hpp"
#include "casec/cyber_domain.hpp"
#include "oracles.hpp"

using namespace casec;

namespace {

SafetyCase template_case() {
    static SafetyCase c = *instantiate_template(default_template_params()).value;
    return c;
}

// The template once evaluation results are in: E7.1 vouches for the result
// claims, everything else keeps its shipped verdict.
SafetyCase template_with_results() {
    SafetyCase c = template_case();
    for (auto& e : c.evidence)
        if (e.id.value == "E7.1") e.verdict = EvidenceVerdict::Supports;
    return c;
}

SafetyCase tiny_evidence_case(EvidenceVerdict verdict) {
    NodeDeclarations decls;
    decls.title = "tiny";
    Claim cl;
    cl.id = NodeId("C1.1");
    cl.statement = "claim";
    decls.claims.push_back(cl);
    Evidence e;
    e.id = NodeId("E1.1");
    e.description = "evidence";
    e.supports = {NodeId("C1.1")};
    e.taxonomy = EvidenceTaxonomy{};
    e.verdict = verdict;
    e.verdict_confidence = 0.9;
    decls.evidence.push_back(e);
    return *build_case(std::move(decls), NodeId("C1.1")).value;
}

ValidationConfig relaxed() {
    ValidationConfig config;
    config.allow_unmitigated_defeaters = true;
    return config;
}

int tree_depth(const TraceTree& t) {
    int deepest = 0;
    for (const auto& sub : t.inputs) deepest = std::max(deepest, tree_depth(sub));
    return deepest + 1;
}

int longest_claim_chain(const SafetyCase& c, const NodeId& id) {
    const Argument* a = c.argument_of(id);
    if (!a) return 1;
    int best = 1;
    std::vector<NodeId> members = a->children;
    if (a->side) members.push_back(*a->side);
    for (const auto& m : members) {
        const Claim* cl = c.find_claim(m);
        if (cl && cl->scope == Scope::InScope)
            best = std::max(best, 1 + longest_claim_chain(c, m));
    }
    return best;
}

}  // namespace

TEST_SUITE("assess_binary") {
    TEST_CASE("one supporting evidence substantiates a claim") {
        AssessResult r = assess_binary(tiny_evidence_case(EvidenceVerdict::Supports));
        REQUIRE(r.ok());
        CHECK(r.value->statuses.at(NodeId("C1.1")) == BinaryStatus::Substantiated);
        CHECK(r.value->root_status == BinaryStatus::Substantiated);
    }

    TEST_CASE("refuting evidence wins over support") {
        SafetyCase c = tiny_evidence_case(EvidenceVerdict::Supports);
        Evidence refuter;
        refuter.id = NodeId("E1.2");
        refuter.description = "counterexample";
        refuter.supports = {NodeId("C1.1")};
        refuter.taxonomy = EvidenceTaxonomy{};
        refuter.verdict = EvidenceVerdict::Refutes;
        NodeDeclarations decls{c.title, c.version, c.meta, c.claims, c.arguments, c.evidence,
                               c.defeaters};
        decls.evidence.push_back(refuter);
        SafetyCase with_refuter = *build_case(std::move(decls), c.root).value;
        AssessResult r = assess_binary(with_refuter);
        REQUIRE(r.ok());
        CHECK(r.value->statuses.at(NodeId("C1.1")) == BinaryStatus::Unsubstantiated);
    }

    TEST_CASE("inconclusive-only evidence leaves a claim undetermined") {
        AssessResult r = assess_binary(tiny_evidence_case(EvidenceVerdict::Inconclusive));
        REQUIRE(r.ok());
        CHECK(r.value->statuses.at(NodeId("C1.1")) == BinaryStatus::Undetermined);
    }

    TEST_CASE("template with results: C1.1 substantiated with assumption load 3") {
        AssessResult r = assess_binary(template_with_results());
        REQUIRE(r.ok());
        const Assessment& a = *r.value;
        CHECK(a.statuses.at(NodeId("O")) == BinaryStatus::OutOfScope);
        CHECK(a.statuses.at(NodeId("C1.1")) == BinaryStatus::Substantiated);
        CHECK(a.traces.at(NodeId("C1.1")).assumption_load == 3);
        // The out-of-scope root delegates to its in-scope fringe, C1.1.
        CHECK(a.root_status == BinaryStatus::Substantiated);
        CHECK(a.root_assumption_load == 3);
        CHECK(a.statuses.at(NodeId("C2.x")) == BinaryStatus::Assumed);
        CHECK(a.statuses.at(NodeId("C5.x")) == BinaryStatus::Assumed);
        CHECK(a.statuses.at(NodeId("C8.x")) == BinaryStatus::Assumed);
    }

    TEST_CASE("forcing every verdict to supports keeps the same verdict and load") {
        SafetyCase c = template_case();
        for (auto& e : c.evidence) e.verdict = EvidenceVerdict::Supports;
        AssessResult r = assess_binary(c);
        REQUIRE(r.ok());
        CHECK(r.value->statuses.at(NodeId("C1.1")) == BinaryStatus::Substantiated);
        CHECK(r.value->traces.at(NodeId("C1.1")).assumption_load == 3);
    }

    TEST_CASE("raw template is undetermined until results arrive") {
        AssessResult r = assess_binary(template_case());
        REQUIRE(r.ok());
        CHECK(r.value->statuses.at(NodeId("C7.1")) == BinaryStatus::Undetermined);
        CHECK(r.value->statuses.at(NodeId("C1.1")) == BinaryStatus::Undetermined);
    }

    TEST_CASE("removing E2.1 drops C2.2 and the root to undetermined") {
        SafetyCase c = template_with_results();
        std::erase_if(c.evidence, [](const Evidence& e) { return e.id.value == "E2.1"; });
        std::erase_if(c.defeaters, [](const Defeater& d) { return d.target.value == "E2.1"; });
        AssessResult r = assess_binary(c);
        REQUIRE(r.ok());
        CHECK(r.value->statuses.at(NodeId("C2.2")) == BinaryStatus::Undetermined);
        CHECK(r.value->statuses.at(NodeId("C1.1")) == BinaryStatus::Undetermined);
        // independent recursive evaluation agrees
        CHECK(oracle::recursive_status(c, NodeId("C2.2")) == BinaryStatus::Undetermined);
        CHECK(oracle::recursive_status(c, NodeId("C1.1")) == BinaryStatus::Undetermined);
    }

    TEST_CASE("unmitigated defeater caps its target at undetermined") {
        SafetyCase c = template_with_results();
        Defeater d;
        d.id = NodeId("D9.1");
        d.description = "open challenge";
        d.target = NodeId("C5.1");
        d.status = DefeaterStatus::Unmitigated;
        d.strength = 0.7;
        c.defeaters.push_back(d);
        AssessResult strict = assess_binary(c);
        CHECK_FALSE(strict.ok());  // V06 blocks under the default config
        AssessResult r = assess_binary(c, relaxed());
        REQUIRE(r.ok());
        CHECK(r.value->statuses.at(NodeId("C5.1")) == BinaryStatus::Undetermined);
        CHECK(r.value->statuses.at(NodeId("C1.1")) == BinaryStatus::Undetermined);
    }

    TEST_CASE("engine equals the recursive oracle on 500+ random cases") {
        int checked = 0;
        for (std::uint32_t seed = 1000; seed < 1600; ++seed) {
            oracle::GeneratorOptions opt;
            opt.allow_unmitigated_defeaters = (seed % 3 == 0);
            SafetyCase c = oracle::random_case(seed, opt);
            auto reports = validate(c, relaxed());
            if (has_errors(reports)) continue;
            AssessResult r = assess_binary(c, relaxed());
            REQUIRE(r.ok());
            for (const auto& cl : c.claims) {
                INFO("seed ", seed, " claim ", cl.id.value);
                CHECK(r.value->statuses.at(cl.id) == oracle::recursive_status(c, cl.id));
            }
            CHECK(r.value->traces.at(c.root).assumption_load ==
                  oracle::recursive_assumption_load(c, c.root));
            ++checked;
        }
        CHECK(checked >= 500);
    }

    TEST_CASE("deterministic across runs") {
        AssessResult a = assess_binary(template_with_results());
        AssessResult b = assess_binary(template_with_results());
        REQUIRE(a.ok());
        REQUIRE(b.ok());
        CHECK(a.value->statuses == b.value->statuses);
        CHECK(a.value->root_status == b.value->root_status);

        ConfidenceAssignment assignment;
        for (const auto& e : template_case().evidence) assignment.overrides[e.id] = 0.93;
        AssessResult ca = assess_confidence(template_with_results(), assignment);
        AssessResult cb = assess_confidence(template_with_results(), assignment);
        REQUIRE(ca.ok());
        REQUIRE(cb.ok());
        CHECK(ca.value->confidences == cb.value->confidences);
    }
}

TEST_SUITE("assess_confidence") {
    TEST_CASE("all leaves 1.0 with no defeaters gives root exactly 1.0") {
        SafetyCase c = template_with_results();
        c.defeaters.clear();
        ConfidenceAssignment assignment;
        for (const auto& e : c.evidence) assignment.overrides[e.id] = 1.0;
        AssessResult r = assess_confidence(c, assignment);
        REQUIRE(r.ok());
        REQUIRE(r.value->root_confidence.has_value());
        CHECK(*r.value->root_confidence == 1.0);
    }

    TEST_CASE("decomposition multiplies children and side") {
        // leaves carry declared confidences; as argument-less claims they are
        // assumptions, which is the one substantiation path V02 leaves open
        const char* doc =
            "case \"t\" version 1\n"
            "claim C1.1 \"parent\"\n"
            "claim C2.1 \"a\" assumption conf=0.9\n"
            "claim C2.2 \"b\" assumption conf=0.8\n"
            "claim C2.x \"side\" side assumption conf=1\n"
            "argument A1 kind=decomposition parent=C1.1 children=[C2.1,C2.2] side=C2.x\n";
        ParseResult parsed = parse_case({doc, std::nullopt});
        REQUIRE(parsed.ok());
        AssessResult r = assess_confidence(*parsed.value);
        REQUIRE(r.ok());
        CHECK(r.value->confidences.at(NodeId("C1.1")) == doctest::Approx(0.72).epsilon(1e-12));
    }

    TEST_CASE("noisy-OR combines multiple supporting evidence") {
        SafetyCase c = tiny_evidence_case(EvidenceVerdict::Supports);
        NodeDeclarations decls{c.title, c.version, c.meta, c.claims, c.arguments, c.evidence,
                               c.defeaters};
        Evidence second;
        second.id = NodeId("E1.2");
        second.description = "more";
        second.supports = {NodeId("C1.1")};
        second.taxonomy = EvidenceTaxonomy{};
        second.verdict = EvidenceVerdict::Supports;
        second.verdict_confidence = 0.5;
        decls.evidence.push_back(second);
        SafetyCase two = *build_case(std::move(decls), c.root).value;
        AssessResult r = assess_confidence(two);
        REQUIRE(r.ok());
        // 1 - (1-0.9)(1-0.5)
        CHECK(r.value->confidences.at(NodeId("C1.1")) == doctest::Approx(0.95).epsilon(1e-12));
    }

    TEST_CASE("template at 0.95 leaves equals the recursive oracle") {
        SafetyCase c = template_with_results();
        ConfidenceAssignment assignment;
        assignment.assumed_confidence = 0.95;
        for (const auto& e : c.evidence) assignment.overrides[e.id] = 0.95;
        AssessResult r = assess_confidence(c, assignment);
        REQUIRE(r.ok());
        oracle::ConfidenceParams params;
        params.assumed_confidence = 0.95;
        params.overrides = assignment.overrides;
        auto expected = oracle::recursive_confidence(c, params, NodeId("C1.1"));
        REQUIRE(expected.has_value());
        CHECK(r.value->confidences.at(NodeId("C1.1")) ==
              doctest::Approx(*expected).epsilon(1e-12));
        REQUIRE(r.value->root_confidence.has_value());
        CHECK(*r.value->root_confidence == doctest::Approx(*expected).epsilon(1e-12));
        // two supporting pieces at 0.95 noisy-OR to 1 - 0.05^2
        CHECK(r.value->confidences.at(NodeId("C5.1")) ==
              doctest::Approx(0.9975).epsilon(1e-12));
        // mitigated defeaters are recorded, never discounted
        const TraceEntry& c51 = r.value->traces.at(NodeId("C5.1"));
        bool noted = false;
        for (const auto& in : c51.inputs)
            if (in.id.value == "D5.1" && in.role == "defeater") noted = true;
        CHECK(noted);
    }

    TEST_CASE("unmitigated defeaters discount by 1 - s(1-e)") {
        SafetyCase c = tiny_evidence_case(EvidenceVerdict::Supports);
        Defeater d;
        d.id = NodeId("D1.1");
        d.description = "challenge";
        d.target = NodeId("C1.1");
        d.status = DefeaterStatus::Unmitigated;
        d.strength = 0.5;
        d.mitigation_effectiveness = 0.2;
        c.defeaters.push_back(d);
        AssessResult r = assess_confidence(c, {}, relaxed());
        REQUIRE(r.ok());
        CHECK(r.value->confidences.at(NodeId("C1.1")) ==
              doctest::Approx(0.9 * (1.0 - 0.5 * 0.8)).epsilon(1e-12));
    }

    TEST_CASE("missing leaf confidence is an error") {
        SafetyCase c = tiny_evidence_case(EvidenceVerdict::Supports);
        for (auto& e : c.evidence) e.verdict_confidence.reset();
        AssessResult r = assess_confidence(c);
        REQUIRE_FALSE(r.ok());
        CHECK(r.errors.front().find("missing") != std::string::npos);
    }

    TEST_CASE("out-of-range assignment is rejected") {
        ConfidenceAssignment bad;
        bad.overrides[NodeId("E1.1")] = 1.5;
        AssessResult r = assess_confidence(tiny_evidence_case(EvidenceVerdict::Supports), bad);
        CHECK_FALSE(r.ok());
    }

    TEST_CASE("assumed_confidence 1.0 warns when assumptions are used") {
        AssessResult r = assess_confidence(template_with_results(), [] {
            ConfidenceAssignment a;
            TemplateParams params = default_template_params();
            SafetyCase c = *instantiate_template(params).value;
            for (const auto& e : c.evidence) a.overrides[e.id] = 0.9;
            return a;
        }());
        REQUIRE(r.ok());
        bool warned = false;
        for (const auto& w : r.value->warnings)
            if (w.find("assumed_confidence") != std::string::npos) warned = true;
        CHECK(warned);
    }

    TEST_CASE("monotone in leaf confidence, anti-monotone in defeater strength") {
        int trials = 0;
        for (std::uint32_t seed = 2000; seed < 2200; ++seed) {
            oracle::GeneratorOptions opt;
            opt.for_confidence = true;
            opt.allow_unmitigated_defeaters = (seed % 2 == 0);
            SafetyCase c = oracle::random_case(seed, opt);
            if (has_errors(validate(c, relaxed()))) continue;
            AssessResult base = assess_confidence(c, {}, relaxed());
            if (!base.ok() || !base.value->root_confidence) continue;
            double root = *base.value->root_confidence;

            for (auto& e : c.evidence) {
                if (!e.verdict_confidence || e.verdict != EvidenceVerdict::Supports) continue;
                double old = *e.verdict_confidence;
                e.verdict_confidence = std::min(1.0, old + 0.25);
                AssessResult bumped = assess_confidence(c, {}, relaxed());
                REQUIRE(bumped.ok());
                CHECK(*bumped.value->root_confidence >= root - 1e-12);
                e.verdict_confidence = old;
                ++trials;
            }
            for (auto& d : c.defeaters) {
                if (d.status != DefeaterStatus::Unmitigated) continue;
                double old = d.strength;
                d.strength = std::min(1.0, old + 0.25);
                AssessResult bumped = assess_confidence(c, {}, relaxed());
                REQUIRE(bumped.ok());
                CHECK(*bumped.value->root_confidence <= root + 1e-12);
                d.strength = old;
                ++trials;
            }
        }
        CHECK(trials > 100);
    }

    TEST_CASE("all propagated values stay in [0,1]") {
        for (std::uint32_t seed = 2300; seed < 2400; ++seed) {
            oracle::GeneratorOptions opt;
            opt.for_confidence = true;
            opt.allow_unmitigated_defeaters = true;
            SafetyCase c = oracle::random_case(seed, opt);
            if (has_errors(validate(c, relaxed()))) continue;
            AssessResult r = assess_confidence(c, {}, relaxed());
            if (!r.ok()) continue;
            for (const auto& [id, v] : r.value->confidences) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }

    TEST_CASE("mode consistency at all-ones input") {
        for (std::uint32_t seed = 2500; seed < 2600; ++seed) {
            oracle::GeneratorOptions opt;
            opt.for_confidence = true;
            SafetyCase c = oracle::random_case(seed, opt);
            if (has_errors(validate(c))) continue;
            ConfidenceAssignment ones;
            for (const auto& e : c.evidence) ones.overrides[e.id] = 1.0;
            for (const auto& cl : c.claims)
                if (cl.leaf_confidence) ones.overrides[cl.id] = 1.0;
            AssessResult conf = assess_confidence(c, ones);
            AssessResult bin = assess_binary(c);
            REQUIRE(bin.ok());
            if (!conf.ok() || !conf.value->root_confidence) continue;
            bool conf_certain = *conf.value->root_confidence == 1.0;
            // Assumed passes like substantiated; the load counter, not the
            // verdict, carries the caveat.
            bool bin_passing = bin.value->root_status == BinaryStatus::Substantiated ||
                               bin.value->root_status == BinaryStatus::Assumed;
            INFO("seed ", seed);
            CHECK(conf_certain == bin_passing);
        }
    }
}

TEST_SUITE("explain_status") {
    TEST_CASE("depth of the root explanation equals the longest claim chain") {
        SafetyCase c = template_with_results();
        AssessResult r = assess_binary(c);
        REQUIRE(r.ok());
        ExplainResult e = explain_status(c, *r.value, NodeId("C1.1"));
        REQUIRE(e.value.has_value());
        CHECK(tree_depth(*e.value) == longest_claim_chain(c, NodeId("C1.1")));
    }

    TEST_CASE("C2.2 explanation lists its three pieces of evidence") {
        SafetyCase c = template_with_results();
        AssessResult r = assess_binary(c);
        REQUIRE(r.ok());
        ExplainResult e = explain_status(c, *r.value, NodeId("C2.2"));
        REQUIRE(e.value.has_value());
        std::vector<std::string> evidence_inputs;
        for (const auto& in : e.value->entry.inputs)
            if (in.role == "evidence") evidence_inputs.push_back(in.id.value);
        CHECK(evidence_inputs == std::vector<std::string>{"E2.1", "E2.2", "E2.3"});
    }

    TEST_CASE("errors on unknown and out-of-scope nodes") {
        SafetyCase c = template_case();
        AssessResult r = assess_binary(c);
        REQUIRE(r.ok());
        CHECK(explain_status(c, *r.value, NodeId("ZZ")).error.has_value());
        CHECK(explain_status(c, *r.value, NodeId("O")).error->find("out of scope") !=
              std::string::npos);
    }

    TEST_CASE("every stored trace recomputes to its stored value") {
        SafetyCase c = template_with_results();
        AssessResult bin = assess_binary(c);
        REQUIRE(bin.ok());
        for (const auto& [id, trace] : bin.value->traces) {
            if (trace.rule == "out-of-scope") continue;
            auto redo = recompute_status_from_trace(trace);
            REQUIRE(redo.has_value());
            CHECK(*redo == bin.value->statuses.at(id));
        }
        ConfidenceAssignment assignment;
        for (const auto& e : c.evidence) assignment.overrides[e.id] = 0.9;
        AssessResult conf = assess_confidence(c, assignment);
        REQUIRE(conf.ok());
        for (const auto& [id, trace] : conf.value->traces) {
            if (trace.rule == "out-of-scope") continue;
            auto redo = recompute_confidence_from_trace(trace);
            REQUIRE(redo.has_value());
            CHECK(*redo == doctest::Approx(conf.value->confidences.at(id)).epsilon(1e-12));
        }
    }
}
