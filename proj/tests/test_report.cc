#include <doctest.h>

#include <causal/errors.hh>
#include <causal/report.hh>

#include "helpers.hh"

using namespace causal;

TEST_CASE("records survive a JSON round trip")
{
    auto records = survey(3, SurveyOptions{ClassifyOptions{true, true, {}}, false, false, 1, {}});
    for (auto & r : records) {
        auto line = record_json(r).dump();
        CHECK(line.find('\n') == std::string::npos);
        auto back = record_from_json(Json::parse(line));
        CHECK(record_json(back).dump() == line);
    }
}

TEST_CASE("counterexample report keys")
{
    auto v = verify_consistency(DiGraph(2, {{0, 1}, {1, 0}}), VerifyOptions{{}, true});
    auto j = verdict_json(v);
    CHECK(j["kind"] == "counterexample");
    CHECK(j.contains("mu"));
    CHECK(j.contains("fixed_points"));
    CHECK(j.contains("alpha_point"));
    CHECK(j["mu"].size() == 2);
}

TEST_CASE("malformed records")
{
    CHECK_THROWS_AS(record_from_json(Json::parse(R"({"form":"0110"})")), InputError);
    CHECK_THROWS_AS(record_from_json(Json::parse(R"({"form":"011","n":2})")), InputError);
}

TEST_CASE("tables and decompositions")
{
    SocModel m(DiGraph(2, {{0, 1}}));
    auto inst = causal::testing::steering_instrument(m);
    auto t = evaluate(m.table(), inst);
    auto tsv = correlation_tsv(t);
    CHECK(tsv.starts_with("0,0\t0,0\t0\t1\n"));
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 16);
    auto j = correlation_json(t);
    CHECK(j["normalized"] == true);
    CHECK(j["entries"].size() == 4);

    auto d = decomposition_json(peel_decompose(m.table(), m.graph(), inst));
    CHECK(d["leader"] == 0);
    CHECK(d["weight"]["num"] == 1);
    CHECK(d["branches"].size() == 2);
    CHECK(d["branches"][0]["then"]["leader"] == 1);
}

TEST_CASE("game report")
{
    DiGraph g(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}});
    GameSpec spec(3, NodeSet{0, 1, 2});
    auto strategy = build_violation_strategy(g, Cycle{{0, 1, 2}}, spec);
    auto j = game_json(spec, Rational{1}, &strategy);
    CHECK(j["bound"]["num"] == 5);
    CHECK(j["bound"]["den"] == 6);
    CHECK(j["win"]["den"] == 1);
    CHECK(j["violated"] == true);
    CHECK(j["roles"]["targets"].size() == 3);
}

TEST_CASE("tsv records")
{
    CHECK(record_tsv_header().starts_with("form\tn\tsoc"));
    auto r = classify(DiGraph(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}));
    CHECK(record_tsv(r) == "011101110\t3\t1\t0\t(0,1,2)\t-\t-\t-\t-");
}
