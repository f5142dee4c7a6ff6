#include <doctest.h>

#include <causal/correlations.hh>
#include <causal/errors.hh>
#include <causal/soc_model.hh>

#include "helpers.hh"

using namespace causal;
using causal::testing::steering_instrument;

namespace
{
    auto switch_graph() -> DiGraph
    {
        return DiGraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}, {1, 2}, {2, 1}});
    }

    /// p(a|x) from the fixed points of the experiment each joint setting induces.
    auto by_fixed_points(const ProcessTable & w, const Instrument & inst) -> CorrelationTable
    {
        CorrelationTable t{MixedRadix(inst.setting_sizes), MixedRadix(inst.outcome_sizes)};
        for (std::uint64_t x = 0; x < t.settings().total(); ++x) {
            auto xs = t.settings().decode(x);
            for (auto & point : fixed_points(w, inst.experiment_at(xs))) {
                Assignment a(inst.parties());
                for (int k = 0; k < inst.parties(); ++k)
                    a[k] = inst.entry(k, xs[k], point[k]).second;
                t.at(x, t.outcomes().encode(a)) += 1;
            }
        }
        return t;
    }

    auto one_party(std::uint32_t settings, std::vector<std::pair<Symbol, Symbol>> table) -> Instrument
    {
        return Instrument{{2}, {settings}, {2}, {std::move(table)}};
    }
}

TEST_CASE("one party")
{
    ProcessTable constant(Alphabet{{2}, {2}}, {1, 1});
    auto inst = one_party(2, {{0, 0}, {1, 1}, {1, 0}, {0, 1}});
    auto t = evaluate(constant, inst);
    CHECK(t.normalized());
    CHECK(t.at(0, 1) == Rational{1});
    CHECK(t.at(1, 1) == Rational{1});
    CHECK(t.at(0, 0) == Rational{0});

    ProcessTable identity(Alphabet{{2}, {2}}, {0, 1});
    auto negate = one_party(2, {{1, 0}, {0, 1}, {1, 0}, {0, 1}});
    auto none = evaluate(identity, negate);
    CHECK(! none.normalized());
    for (std::uint64_t x = 0; x < 2; ++x)
        CHECK(none.column_sum(x) == Rational{0});

    auto copy = one_party(1, {{0, 0}, {1, 1}});
    CHECK(evaluate(identity, copy).column_sum(0) == Rational{2});
}

TEST_CASE("evaluation agrees with fixed points of the induced experiments")
{
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 3; ++n)
        for (auto & g : causal::testing::classes(n)) {
            auto w = SocModel(g).table();
            for (int trial = 0; trial < 3; ++trial) {
                auto inst = causal::testing::random_instrument(w.alphabet(), 2, 2, rng);
                auto t = evaluate(w, inst);
                CHECK(t == by_fixed_points(w, inst));
                if (is_soc(g))
                    CHECK(t.normalized());
            }
        }

    SocModel m(switch_graph());
    auto w = m.table();
    auto inst = steering_instrument(m);
    CHECK(evaluate(w, inst) == by_fixed_points(w, inst));
    CHECK(evaluate(w, inst).normalized());
}

TEST_CASE("evaluation errors")
{
    ProcessTable w(Alphabet{{2}, {2}}, {1, 1});
    CHECK_THROWS_AS(evaluate(w, Instrument{{3}, {1}, {2}, {{{0, 0}, {0, 0}, {0, 0}}}}), InputError);
    CHECK_THROWS_AS(evaluate(w, Instrument{{2}, {1}, {2}, {{{0, 0}}}}), InputError);
    std::vector<Symbol> far{5};
    CHECK_THROWS_AS(evaluate_column(w, one_party(1, {{0, 0}, {1, 1}}), far), InputError);
    CHECK_THROWS_AS((CorrelationTable{MixedRadix({1U << 13}), MixedRadix({1U << 12})}), BudgetExceeded);
}

TEST_CASE("peeling a chain")
{
    SocModel m(DiGraph(2, {{0, 1}}));
    auto inst = steering_instrument(m);
    auto w = m.table();
    auto d = peel_decompose(w, m.graph(), inst);
    CHECK(d.leader == 0);
    CHECK(d.parties == std::vector<int>{0, 1});
    CHECK(d.weight == Rational{1});
    REQUIRE(d.branches.size() == 2);
    CHECK(d.branches[0].leader == 1);
    CHECK(d.branches[0].branches.empty());
    // the source always reads 1
    CHECK(d.marginal_at(0, 1) == Rational{1});
    CHECK(reconstruct(d, inst) == evaluate(w, inst));
}

TEST_CASE("peeling the switch")
{
    SocModel m(switch_graph());
    auto inst = steering_instrument(m);
    auto w = m.table();
    auto d = peel_decompose(w, m.graph(), inst);
    CHECK(d.leader == 0);
    CHECK(reconstruct(d, inst) == evaluate(w, inst));

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        auto r = causal::testing::random_instrument(w.alphabet(), 2, 2, rng);
        CHECK(reconstruct(peel_decompose(w, m.graph(), r), r) == evaluate(w, r));
    }
}

TEST_CASE("signalling graphs")
{
    CHECK(signalling_graph(ProcessTable(Alphabet{{2, 2}, {2, 2}}, {3, 3, 3, 3})).edges().empty());
    CHECK(signalling_graph(ProcessTable(Alphabet{{2, 2}, {2, 2}}, {0, 2, 1, 3}))
            == DiGraph(2, {{0, 1}, {1, 0}}));
    for (int n = 1; n <= 4; ++n)
        for (auto & g : causal::testing::classes(n))
            for (auto [u, v] : signalling_graph(SocModel(g).table()).edges())
                CHECK(g.has_edge(u, v));

    // once the switch's control is fixed, the target order is definite
    SocModel m(switch_graph());
    auto d = peel_decompose(m.table(), m.graph(), steering_instrument(m));
    for (auto & branch : d.branches)
        CHECK(branch.leader != 3);
}

TEST_CASE("peeling one party")
{
    ProcessTable constant(Alphabet{{2}, {2}}, {0, 0});
    auto inst = one_party(2, {{0, 1}, {1, 0}, {1, 0}, {0, 1}});
    auto d = peel_decompose(constant, DiGraph(1), inst);
    CHECK(d.leader == 0);
    CHECK(d.branches.empty());
    CHECK(d.marginal_at(0, 1) == Rational{1});
    CHECK(d.marginal_at(1, 0) == Rational{1});
    CHECK(reconstruct(d, inst) == evaluate(constant, inst));
}

TEST_CASE("peeling preconditions")
{
    DiGraph triangle(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}});
    SocModel t(triangle);
    CHECK_THROWS_AS(peel_decompose(t.table(), triangle, steering_instrument(t)), InputError);

    // a two-party table that is not a process, on a chordless structure
    ProcessTable swap(Alphabet{{2, 2}, {2, 2}}, {0, 2, 1, 3});
    auto inst = Instrument::blank({2, 2}, {1, 1}, {1, 1});
    CHECK_THROWS_AS(peel_decompose(swap, DiGraph(2, {{0, 1}}), inst), InputError);

    // the graph claims the wrong direction: the claimed source is not constant
    SocModel chain(DiGraph(2, {{0, 1}}));
    CHECK_THROWS_AS(peel_decompose(chain.table(), DiGraph(2, {{1, 0}}), steering_instrument(chain)), InvariantViolation);

    CHECK_THROWS_AS(peel_decompose(chain.table(), DiGraph(3), steering_instrument(chain)), InputError);
}

TEST_CASE("fixed-order game values")
{
    CHECK(max_causal_game_value(GameSpec(1, NodeSet{0})) == Rational(1, 2));
    CHECK(max_causal_game_value(GameSpec(2, NodeSet{0})) == Rational(1, 2));
    CHECK(max_causal_game_value(GameSpec(2, NodeSet{0, 1})) == Rational(3, 4));
    CHECK(max_causal_game_value(GameSpec(3, NodeSet{1, 2})) == Rational(3, 4));
    CHECK_THROWS_AS(max_causal_game_value(GameSpec(4, NodeSet{0, 1, 2, 3}), ScanOptions{1000, false, 1}), BudgetExceeded);
}
