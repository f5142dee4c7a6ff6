#include <doctest.h>

#include <causal/errors.hh>
#include <causal/soc_model.hh>

#include "helpers.hh"

using namespace causal;
using Kind = ConsistencyVerdict::Kind;

namespace
{
    /// Verdict recomputed from scratch: first experiment whose fixed points are not exactly the predicted one.
    auto direct_verdict(const DiGraph & g) -> ConsistencyVerdict
    {
        SocModel m(g);
        auto w = m.table();
        ConsistencyVerdict v;
        v.experiments = experiment_count(w.alphabet());
        for (std::uint64_t e = 0; e < v.experiments; ++e) {
            auto mu = experiment_at(w.alphabet(), e);
            auto points = fixed_points(w, mu);
            auto predicted = recursive_fixed_point(m, mu);
            if (points.size() != 1 || points.front() != predicted) {
                v.kind = Kind::counterexample;
                v.mu = mu;
                v.fixed_points = points;
                v.recursive_point = predicted;
                return v;
            }
        }
        return v;
    }

    auto two_cycle() -> DiGraph
    {
        return DiGraph(2, {{0, 1}, {1, 0}});
    }
}

TEST_CASE("selection model alphabets")
{
    SocModel m(DiGraph(4, {{0, 2}, {0, 1}, {1, 2}}));
    CHECK(m.output_size(0) == 3);
    CHECK(m.output_size(2) == 1);
    CHECK(m.selection_symbol(0, 1) == 1);
    CHECK(m.selection_symbol(0, 2) == 2);
    CHECK(m.selected_child(0, bottom) == std::nullopt);
    CHECK(m.selected_child(0, 2) == 2);
    CHECK_THROWS_AS(m.selection_symbol(1, 0), InputError);
    CHECK_THROWS_AS(m.selected_child(1, 2), InputError);
    auto a = m.alphabet();
    CHECK(a.input_sizes == std::vector<std::uint32_t>{2, 2, 2, 2});
    CHECK(a.output_sizes == std::vector<std::uint32_t>{3, 2, 1, 1});

    DiGraph loop(2, {{0, 1}});
    loop.add_edge(1, 1);
    CHECK_THROWS_AS(SocModel{loop}, InputError);
}

TEST_CASE("inputs follow the product of parent selections")
{
    SocModel m(DiGraph(4, {{0, 2}, {1, 2}, {0, 1}}));
    // node 3 is isolated
    for (std::uint64_t o = 0; o < m.table().outputs().total(); ++o) {
        auto out = m.table().outputs().decode(o);
        CHECK(m.input_for(3, out) == 1);
        CHECK(m.input_for(0, out) == 1);
        CHECK(m.input_for(1, out) == (m.selected_child(0, out[0]) == 1 ? 1U : 0U));
        bool both = m.selected_child(0, out[0]) == 2 && m.selected_child(1, out[1]) == 2;
        CHECK(m.input_for(2, out) == (both ? 1U : 0U));
    }
}

TEST_CASE("faithfulness")
{
    CHECK(check_faithfulness(SocModel(DiGraph(2, {{0, 1}}))));
    CHECK(check_faithfulness(SocModel(DiGraph(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}))));
    for (int n = 1; n <= 4; ++n)
        for (auto & g : causal::testing::classes(n))
            CHECK(check_faithfulness(SocModel(g)));
}

TEST_CASE("path recursion on the bare two-cycle")
{
    SocModel m(two_cycle());
    Experiment mu{{{1, 1}, {1, 1}}};
    std::vector<Node> none;
    std::vector<Node> after_zero{0};
    std::vector<Node> revisit{1, 0};
    CHECK(recursive_input(m, mu, 0, revisit) == 0);
    // with 0 already on the path, 1 sees mu_0(0)
    CHECK(recursive_input(m, mu, 1, after_zero) == 1);
    CHECK(recursive_input(m, Experiment{{{0, 1}, {1, 1}}}, 1, after_zero) == 0);
    CHECK(recursive_input(m, mu, 0, none) == 1);
    CHECK(recursive_fixed_point(m, mu) == Assignment{1, 1});

    // the recursion still answers where the fixed point is not unique
    Experiment copy{{{0, 1}, {0, 1}}};
    CHECK(recursive_fixed_point(m, copy) == Assignment{0, 0});
    CHECK(count_fixed_points(m.table(), copy) == 2);
}

TEST_CASE("isolated nodes and chains")
{
    SocModel single(DiGraph(1));
    CHECK(recursive_fixed_point(single, Experiment{{{0, 0}}}) == Assignment{1});

    SocModel chain(DiGraph(3, {{0, 1}, {1, 2}}));
    Experiment forward{{{1, 1}, {0, 1}, {0, 0}}};
    CHECK(recursive_fixed_point(chain, forward) == Assignment{1, 1, 1});
    Experiment stop{{{0, 0}, {0, 1}, {0, 0}}};
    CHECK(recursive_fixed_point(chain, stop) == Assignment{1, 0, 0});
}

TEST_CASE("verification examples")
{
    CHECK(verify_consistency(DiGraph(3, {{0, 1}, {1, 2}})).kind == Kind::consistent);
    CHECK(verify_consistency(DiGraph(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}})).kind == Kind::consistent);

    auto skipped = verify_consistency(two_cycle());
    CHECK(skipped.kind == Kind::skipped);
    CHECK(std::string(to_string(skipped.kind)) == "skipped");

    auto forced = verify_consistency(two_cycle(), VerifyOptions{{}, true});
    CHECK(forced.kind == Kind::counterexample);
    REQUIRE(forced.mu);
    CHECK(count_fixed_points(SocModel(two_cycle()).table(), *forced.mu) == forced.fixed_points.size());
    CHECK(forced.fixed_points.size() != 1);

    DiGraph loop(1);
    loop.add_edge(0, 0);
    CHECK_THROWS_AS(verify_consistency(loop, VerifyOptions{{}, true}), InputError);
    CHECK_THROWS_AS(verify_consistency(DiGraph(3, {{0, 1}, {1, 2}}), VerifyOptions{{10, false, 1}, false}), BudgetExceeded);
}

TEST_CASE("fast verifier agrees with direct counting")
{
    std::vector<DiGraph> graphs;
    for (int n = 1; n <= 3; ++n)
        for (auto & g : causal::testing::classes(n))
            graphs.push_back(g);
    auto four = causal::testing::classes(4);
    for (std::size_t i = 0; i < four.size(); i += 7)
        graphs.push_back(four[i]);

    for (auto & g : graphs) {
        auto expected = direct_verdict(g);
        for (unsigned jobs : {1U, 4U}) {
            auto v = verify_consistency(g, VerifyOptions{{1'000'000'000, false, jobs}, true});
            CAPTURE(adjacency_code(g).to_string());
            CHECK(v.kind == expected.kind);
            CHECK(v.experiments == expected.experiments);
            CHECK(v.mu == expected.mu);
            CHECK(v.fixed_points == expected.fixed_points);
            if (expected.mu)
                CHECK(v.recursive_point == expected.recursive_point);
        }
    }
}

TEST_CASE("soc graphs on four nodes are consistent and the others are not")
{
    for (auto & g : causal::testing::classes(4)) {
        auto v = verify_consistency(g, VerifyOptions{{}, true});
        CHECK((v.kind == Kind::consistent) == is_soc(g));
    }
}
