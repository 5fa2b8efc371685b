#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "casec/assessment.hpp"
#include "casec/binomial.hpp"
#include "casec/cyber_domain.hpp"
#include "casec/eval_ingest.hpp"
#include "oracles.hpp"

using namespace casec;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(CASEC_FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SafetyCase template_case() {
    static SafetyCase c = *instantiate_template(default_template_params()).value;
    return c;
}

}  // namespace

TEST_SUITE("binomial bounds") {
    TEST_CASE("boundary cases") {
        CHECK(binomial_upper_bound(40, 40, 0.05) == 1.0);
        CHECK(binomial_lower_bound(0, 40, 0.05) == 0.0);
        // closed form: (1-p)^1 = alpha at p = 0.95
        CHECK(binomial_upper_bound(0, 1, 0.05) == doctest::Approx(0.95).epsilon(1e-9));
    }

    TEST_CASE("frozen oracle value for k=4, n=40") {
        CHECK(binomial_upper_bound(4, 40, 0.05) ==
              doctest::Approx(0.2143976).epsilon(1e-6));
    }

    TEST_CASE("domain violations throw") {
        CHECK_THROWS(binomial_upper_bound(5, 4, 0.05));
        CHECK_THROWS(binomial_upper_bound(-1, 4, 0.05));
        CHECK_THROWS(binomial_upper_bound(1, 0, 0.05));
        CHECK_THROWS(binomial_upper_bound(1, 4, 0.0));
        CHECK_THROWS(binomial_lower_bound(1, 4, 1.0));
    }

    TEST_CASE("agrees with the incomplete-beta oracle on a spot grid") {
        for (std::int64_t n : {1, 5, 12, 40}) {
            for (std::int64_t k = 0; k <= n; k += std::max<std::int64_t>(1, n / 4)) {
                for (double alpha : {0.2, 0.05, 0.01}) {
                    INFO("k=", k, " n=", n, " alpha=", alpha);
                    CHECK(binomial_upper_bound(k, n, alpha) ==
                          doctest::Approx(oracle::cp_upper(k, n, alpha)).epsilon(1e-7));
                    CHECK(binomial_lower_bound(k, n, alpha) ==
                          doctest::Approx(oracle::cp_lower(k, n, alpha)).epsilon(1e-7));
                }
            }
        }
    }

    TEST_CASE("bound definition: cdf at the bound dips under alpha") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 60; ++trial) {
            std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 60)(rng);
            std::int64_t k = std::uniform_int_distribution<std::int64_t>(0, n)(rng);
            double alpha = std::uniform_real_distribution<double>(0.005, 0.3)(rng);
            double upper = binomial_upper_bound(k, n, alpha);
            if (k < n) {
                CHECK(binomial_cdf(k, n, upper) <= alpha + 1e-9);
                if (upper > 1e-5)
                    CHECK(binomial_cdf(k, n, upper - 1e-6) >= alpha - 1e-9);
            }
            double lower = binomial_lower_bound(k, n, alpha);
            if (k > 0) {
                CHECK(1.0 - binomial_cdf(k - 1, n, lower) <= alpha + 1e-9);
                if (lower < 1.0 - 1e-5)
                    CHECK(1.0 - binomial_cdf(k - 1, n, lower + 1e-6) >= alpha - 1e-9);
            }
        }
    }
}

TEST_SUITE("parse_runs") {
    TEST_CASE("two valid JSONL rows") {
        const char* doc =
            "{\"suite\":\"s\",\"task\":\"t1\",\"setup\":\"x\",\"condition\":\"aided\","
            "\"success\":true}\n"
            "{\"suite\":\"s\",\"task\":\"t2\",\"setup\":\"x\",\"condition\":\"unaided\","
            "\"success\":false,\"score\":0.5}\n";
        RunParseResult r = parse_runs({doc, std::nullopt}, RunFormat::Jsonl);
        CHECK_FALSE(r.has_errors());
        REQUIRE(r.records.size() == 2);
        CHECK(r.records[0].success);
        CHECK(r.records[1].condition == RunCondition::Unaided);
        CHECK(r.records[1].score == doctest::Approx(0.5));
    }

    TEST_CASE("missing success is reported with its line and the row dropped") {
        const char* doc =
            "{\"suite\":\"s\",\"task\":\"t1\",\"setup\":\"x\",\"condition\":\"aided\","
            "\"success\":true}\n"
            "{\"suite\":\"s\",\"task\":\"t2\",\"setup\":\"x\",\"condition\":\"aided\"}\n";
        RunParseResult r = parse_runs({doc, std::nullopt}, RunFormat::Jsonl);
        CHECK(r.has_errors());
        REQUIRE(r.records.size() == 1);  // partial accept
        bool found = false;
        for (const auto& d : r.diagnostics)
            if (d.code == "R003" && d.line == 2 &&
                d.message.find("success") != std::string::npos)
                found = true;
        CHECK(found);
    }

    TEST_CASE("unknown fields and bad tiers are rejected") {
        const char* doc =
            "{\"suite\":\"s\",\"task\":\"t\",\"setup\":\"x\",\"condition\":\"aided\","
            "\"success\":true,\"grader\":\"gpt\"}\n"
            "{\"suite\":\"s\",\"task\":\"t\",\"setup\":\"x\",\"condition\":\"aided\","
            "\"success\":true,\"subject_tier\":\"ScriptKiddie\"}\n";
        RunParseResult r = parse_runs({doc, std::nullopt}, RunFormat::Jsonl);
        CHECK(r.records.empty());
        int r004 = 0, r005 = 0;
        for (const auto& d : r.diagnostics) {
            if (d.code == "R004") ++r004;
            if (d.code == "R005") ++r005;
        }
        CHECK(r004 == 1);
        CHECK(r005 == 1);
    }

    TEST_CASE("empty input") {
        RunParseResult r = parse_runs({"", std::nullopt}, RunFormat::Jsonl);
        CHECK(r.has_errors());
        CHECK(r.diagnostics.front().code == "R001");
    }

    TEST_CASE("CSV carries the same fields") {
        const char* doc =
            "suite,task,setup,condition,subject_tier,success,score\n"
            "s,t1,x,aided,,true,\n"
            "s,t2,x,unaided,TechnicalNonExpert,false,0.25\n"
            "s,t3,x,aided,,maybe,\n";
        RunParseResult r = parse_runs({doc, std::nullopt}, RunFormat::Csv);
        CHECK(r.has_errors());  // the "maybe" row
        REQUIRE(r.records.size() == 2);
        CHECK(r.records[1].subject_tier == ThreatTier::TechnicalNonExpert);
        CHECK(r.records[1].score == doctest::Approx(0.25));
    }

    TEST_CASE("the committed 120-row fixture tallies as designed") {
        RunParseResult r =
            parse_runs({read_fixture("runs_baseline.jsonl"), std::nullopt}, RunFormat::Jsonl);
        CHECK_FALSE(r.has_errors());
        REQUIRE(r.records.size() == 120);
        auto aggregates = aggregate(r.records, 0.05);
        REQUIRE(aggregates.size() == 4);
        // hand-tallied: each (suite, setup) key holds 30 runs with 3 successes
        for (const auto& agg : aggregates) {
            CHECK(agg.n == 30);
            CHECK(agg.k == 3);
            CHECK(agg.rate == doctest::Approx(0.1));
        }
        RunParseResult adv = parse_runs({read_fixture("runs_adversarial.jsonl"), std::nullopt},
                                        RunFormat::Jsonl);
        auto adv_agg = aggregate(adv.records, 0.05);
        REQUIRE(adv_agg.size() == 4);
        for (const auto& agg : adv_agg) {
            CHECK(agg.n == 30);
            CHECK(agg.k == 18);
        }
    }
}

TEST_SUITE("aggregate") {
    TEST_CASE("three of four in one key") {
        std::vector<RunRecord> records;
        for (int i = 0; i < 4; ++i) {
            RunRecord rec;
            rec.suite = "s";
            rec.task = "t" + std::to_string(i);
            rec.setup = "x";
            rec.condition = RunCondition::Aided;
            rec.success = i < 3;
            records.push_back(rec);
        }
        auto aggs = aggregate(records, 0.05);
        REQUIRE(aggs.size() == 1);
        CHECK(aggs[0].n == 4);
        CHECK(aggs[0].k == 3);
        CHECK(aggs[0].rate == doctest::Approx(0.75));
        CHECK(aggs[0].lower_bound <= aggs[0].rate);
        CHECK(aggs[0].upper_bound >= aggs[0].rate);
    }

    TEST_CASE("empty input aggregates to nothing") {
        CHECK(aggregate({}, 0.05).empty());
    }

    TEST_CASE("order-insensitive") {
        RunParseResult r =
            parse_runs({read_fixture("runs_baseline.jsonl"), std::nullopt}, RunFormat::Jsonl);
        auto baseline = aggregate(r.records, 0.05);
        std::mt19937 rng(5);
        for (int trial = 0; trial < 5; ++trial) {
            std::shuffle(r.records.begin(), r.records.end(), rng);
            auto shuffled = aggregate(r.records, 0.05);
            REQUIRE(shuffled.size() == baseline.size());
            for (size_t i = 0; i < baseline.size(); ++i) {
                CHECK(shuffled[i].key == baseline[i].key);
                CHECK(shuffled[i].n == baseline[i].n);
                CHECK(shuffled[i].k == baseline[i].k);
                CHECK(shuffled[i].lower_bound == baseline[i].lower_bound);
                CHECK(shuffled[i].upper_bound == baseline[i].upper_bound);
            }
        }
    }

    TEST_CASE("subject tier separates keys") {
        std::vector<RunRecord> records;
        for (int i = 0; i < 2; ++i) {
            RunRecord rec;
            rec.suite = "s";
            rec.task = "t";
            rec.setup = "uplift";
            rec.condition = RunCondition::Aided;
            rec.success = true;
            rec.subject_tier =
                i ? std::optional(ThreatTier::TechnicalNonExpert) : std::nullopt;
            records.push_back(rec);
        }
        CHECK(aggregate(records, 0.05).size() == 2);
    }
}

TEST_SUITE("coverage") {
    // 10,000 simulated Bin(40, 0.3) draws: the one-sided 95% upper bound
    // must cover the true rate in at least 94% of them.
    TEST_CASE("one-sided upper bound covers p=0.3 at the nominal rate") {
        std::mt19937 rng(20240607);
        std::binomial_distribution<int> bin(40, 0.3);
        int covered = 0;
        const int draws = 10000;
        // bounds depend only on k: precompute the 41 possible values
        std::vector<double> upper(41);
        for (int k = 0; k <= 40; ++k) upper[k] = binomial_upper_bound(k, 40, 0.05);
        for (int i = 0; i < draws; ++i)
            if (upper[bin(rng)] > 0.3) ++covered;
        CHECK(covered >= int(draws * 0.94));
    }
}

TEST_SUITE("to_evidence") {
    static AggregateResult no_uplift_agg() {
        AggregateResult agg;
        agg.key = {"vuln_discovery", "auto_oversight", RunCondition::Aided, std::nullopt};
        agg.n = 30;
        agg.k = 3;
        agg.rate = 0.1;
        agg.alpha = 0.05;
        agg.lower_bound = binomial_lower_bound(3, 30, 0.05);
        agg.upper_bound = binomial_upper_bound(3, 30, 0.05);
        return agg;
    }

    static UpliftResult verdict_for(const AggregateResult& agg) {
        TemplateParams params = default_template_params();
        RiskModel rm = params.risk_models.front();
        return uplift_verdict(agg, params.suites.front(), rm, 0.05);
    }

    TEST_CASE("no-uplift results attach as supporting evidence") {
        SafetyCase c = template_case();
        AggregateResult agg = no_uplift_agg();
        UpliftResult uv = verdict_for(agg);
        REQUIRE(uv.verdict == UpliftVerdict::NoUplift);
        ToEvidenceResult r = to_evidence(c, agg, uv, NodeId("E9.1"), NodeId("C7.1"));
        REQUIRE(r.value.has_value());
        const Evidence* ev = r.value->find_evidence(NodeId("E9.1"));
        REQUIRE(ev != nullptr);
        CHECK(ev->verdict == EvidenceVerdict::Supports);
        CHECK(*ev->payload == "results:vuln_discovery/auto_oversight/aided");
        REQUIRE(ev->taxonomy.has_value());
        CHECK(ev->taxonomy->form == EvidenceTaxonomy::Form::Quantitative);
        CHECK(ev->taxonomy->channel == EvidenceTaxonomy::Channel::Technical);
        CHECK(ev->taxonomy->basis == EvidenceTaxonomy::Basis::Empirical);
        CHECK(ev->taxonomy->origin == EvidenceTaxonomy::Origin::Internal);
    }

    TEST_CASE("uplift results refute and flip the claim to unsubstantiated") {
        SafetyCase c = template_case();
        AggregateResult agg = no_uplift_agg();
        agg.k = 25;
        agg.rate = 25.0 / 30.0;
        UpliftResult uv = verdict_for(agg);
        REQUIRE(uv.verdict == UpliftVerdict::Uplift);
        ToEvidenceResult r = to_evidence(c, agg, uv, NodeId("E9.1"), NodeId("C7.1"));
        REQUIRE(r.value.has_value());
        CHECK(r.value->find_evidence(NodeId("E9.1"))->verdict == EvidenceVerdict::Refutes);
        AssessResult assessed = assess_binary(*r.value);
        REQUIRE(assessed.ok());
        CHECK(assessed.value->statuses.at(NodeId("C7.1")) == BinaryStatus::Unsubstantiated);
    }

    TEST_CASE("inconclusive maps to inconclusive") {
        SafetyCase c = template_case();
        AggregateResult agg = no_uplift_agg();
        agg.n = 4;
        agg.k = 1;
        agg.rate = 0.25;
        UpliftResult uv = verdict_for(agg);
        REQUIRE(uv.verdict == UpliftVerdict::Inconclusive);
        ToEvidenceResult r = to_evidence(c, agg, uv, NodeId("E9.1"), NodeId("C7.1"));
        REQUIRE(r.value.has_value());
        CHECK(r.value->find_evidence(NodeId("E9.1"))->verdict ==
              EvidenceVerdict::Inconclusive);
    }

    TEST_CASE("id collisions and unknown claims are errors") {
        SafetyCase c = template_case();
        AggregateResult agg = no_uplift_agg();
        UpliftResult uv = verdict_for(agg);
        CHECK(to_evidence(c, agg, uv, NodeId("E2.1"), NodeId("C7.1")).error.has_value());
        CHECK(to_evidence(c, agg, uv, NodeId("E9.1"), NodeId("QQ")).error.has_value());
        CHECK(to_evidence(c, agg, uv, NodeId("E9.1"), NodeId("A7")).error.has_value());
        SafetyCase with = *to_evidence(c, agg, uv, NodeId("E9.1"), NodeId("C7.1")).value;
        CHECK(to_evidence(with, agg, uv, NodeId("E9.1"), NodeId("C7.2")).error.has_value());
    }

    TEST_CASE("the input case is never mutated") {
        SafetyCase c = template_case();
        SafetyCase snapshot = c;
        AggregateResult agg = no_uplift_agg();
        UpliftResult uv = verdict_for(agg);
        ToEvidenceResult r = to_evidence(c, agg, uv, NodeId("E9.1"), NodeId("C7.1"));
        REQUIRE(r.value.has_value());
        CHECK(structurally_equal(c, snapshot));
        CHECK_FALSE(structurally_equal(c, *r.value));
    }
}
