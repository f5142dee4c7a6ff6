#include <doctest.h>

#include <causal/errors.hh>
#include <causal/process.hh>
#include <causal/soc_model.hh>

#include "helpers.hh"

using namespace causal;

namespace
{
    auto bit() -> Alphabet
    {
        return Alphabet{{2}, {2}};
    }

    auto identity() -> ProcessTable
    {
        return ProcessTable(bit(), {0, 1});
    }

    auto constant(std::uint64_t c) -> ProcessTable
    {
        return ProcessTable(bit(), {c, c});
    }

    auto negation() -> Experiment
    {
        return Experiment{{{1, 0}}};
    }

    /// Binary tables where omega_k reads o_{-k} through `code`, 2^(n-1) bits per party.
    auto nonsignaling_binary(int n, std::uint64_t code) -> ProcessTable
    {
        Alphabet a{std::vector<std::uint32_t>(n, 2), std::vector<std::uint32_t>(n, 2)};
        int width = 1 << (n - 1);
        return ProcessTable::from_function(a, [&](std::span<const Symbol> o) {
            Assignment i(n);
            for (int k = 0; k < n; ++k) {
                unsigned rest = 0;
                for (int l = 0; l < n; ++l)
                    if (l != k)
                        rest = rest * 2 + o[l];
                i[k] = (code >> (k * width + rest)) & 1U;
            }
            return i;
        });
    }

    /// Index of the first experiment without a unique fixed point, by direct counting.
    auto first_failure(const ProcessTable & w) -> std::optional<std::uint64_t>
    {
        for (std::uint64_t e = 0; e < experiment_count(w.alphabet()); ++e)
            if (count_fixed_points(w, experiment_at(w.alphabet(), e)) != 1)
                return e;
        return std::nullopt;
    }
}

TEST_CASE("mixed radix order is lexicographic")
{
    MixedRadix r({2, 3});
    CHECK(r.total() == 6);
    CHECK(r.encode(std::vector<Symbol>{1, 0}) == 3);
    CHECK(r.decode(5) == Assignment{1, 2});
    CHECK(r.digit(4, 1) == 1);
}

TEST_CASE("experiments are ordered by their concatenated tables")
{
    Alphabet a{{2, 1}, {3, 2}};
    CHECK(experiment_count(a) == 18);
    CHECK(experiment_at(a, 0).tables == std::vector<std::vector<Symbol>>{{0, 0}, {0}});
    CHECK(experiment_at(a, 1).tables == std::vector<std::vector<Symbol>>{{0, 0}, {1}});
    CHECK(experiment_at(a, 2).tables == std::vector<std::vector<Symbol>>{{0, 1}, {0}});
    CHECK(experiment_at(a, 17).tables == std::vector<std::vector<Symbol>>{{2, 2}, {1}});
}

TEST_CASE("fixed point counts on one party")
{
    CHECK(count_fixed_points(identity(), negation()) == 0);
    CHECK(count_fixed_points(identity(), Experiment{{{0, 1}}}) == 2);
    for (std::uint64_t c : {0, 1})
        for (std::uint64_t e = 0; e < 4; ++e) {
            auto mu = experiment_at(bit(), e);
            CHECK(count_fixed_points(constant(c), mu) == 1);
            CHECK(fixed_points(constant(c), mu) == std::vector<Assignment>{{static_cast<Symbol>(c)}});
        }
    CHECK_THROWS_AS(count_fixed_points(identity(), Experiment{{{0}}}), InputError);
    CHECK_THROWS_AS(count_fixed_points(identity(), Experiment{{{0, 2}}}), InputError);
}

TEST_CASE("validity")
{
    auto v = is_process(identity());
    CHECK(! v.valid);
    REQUIRE(v.counterexample);
    // the identity experiment comes first and has two fixed points
    CHECK(v.counterexample->tables == std::vector<std::vector<Symbol>>{{0, 1}});
    CHECK(v.fixed_point_count == count_fixed_points(identity(), *v.counterexample));

    CHECK(is_process(constant(0)).valid);
    CHECK(is_process(constant(1)).valid);

    auto triangle = SocModel(DiGraph(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}})).table();
    CHECK(experiment_count(triangle.alphabet()) == 729);
    CHECK(is_process(triangle).valid);
}

TEST_CASE("validity scan agrees with direct counting on every binary two-party table")
{
    Alphabet a{{2, 2}, {2, 2}};
    int valid = 0;
    for (std::uint64_t code = 0; code < 256; ++code) {
        std::vector<std::uint64_t> rows(4);
        for (int o = 0; o < 4; ++o)
            rows[o] = (code >> (2 * o)) & 3U;
        ProcessTable w(a, rows);
        auto expected = first_failure(w);
        for (unsigned jobs : {1U, 3U}) {
            auto v = is_process(w, ScanOptions{1'000'000, false, jobs});
            CHECK(v.valid == ! expected);
            if (expected) {
                CHECK(*v.counterexample == experiment_at(a, *expected));
                CHECK(v.fixed_point_count == count_fixed_points(w, *v.counterexample));
            }
        }
        valid += ! expected;
    }
    // 4 constants, and 4 each where exactly one party signals to the other
    CHECK(valid == 12);
}

TEST_CASE("scan budget")
{
    auto w = SocModel(DiGraph(3, {{0, 1}, {1, 2}})).table();
    CHECK_THROWS_AS(is_process(w, ScanOptions{10, false, 1}), BudgetExceeded);
    CHECK_NOTHROW(is_process(w, ScanOptions{10, true, 1}));
}

TEST_CASE("non-signalling")
{
    CHECK(is_nonsignaling(constant(1)));
    CHECK(! is_nonsignaling(identity()));
    for (auto & g : causal::testing::classes(3))
        CHECK(is_nonsignaling(SocModel(g).table()));
}

TEST_CASE("antinomies")
{
    auto r = antinomy_report(identity());
    CHECK(r.grandparent);
    CHECK(r.information);
    CHECK(r.signaling_warning);
    CHECK(r.equivalence_holds());

    auto c = antinomy_report(constant(0));
    CHECK(! c.grandparent);
    CHECK(! c.information);
    CHECK(! c.signaling_warning);
    CHECK(antinomy_equivalence_holds(constant(0)));

    for (std::uint64_t code = 0; code < 16; ++code)
        CHECK(antinomy_equivalence_holds(nonsignaling_binary(2, code)));
}

TEST_CASE("reduction keeps every binary non-signalling process valid")
{
    for (int n = 2; n <= 3; ++n) {
        int width = 1 << (n - 1);
        int tested = 0;
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * width)); ++code) {
            auto w = nonsignaling_binary(n, code);
            if (! is_process(w).valid)
                continue;
            ++tested;
            for (int k = 0; k < n; ++k)
                for (std::uint64_t e = 0; e < 4; ++e) {
                    auto mu_k = experiment_at(bit(), e).tables[0];
                    auto reduced = reduce(w, k, mu_k);
                    CHECK(reduced.parties() == n - 1);
                    CHECK(is_process(reduced).valid);
                    if (n == 2)
                        CHECK(reduced.row(0) == reduced.row(1));
                }
        }
        CHECK(tested > 0);
    }
}

TEST_CASE("reduction examples")
{
    Alphabet two{{2, 2}, {2, 2}};
    ProcessTable c(two, {3, 3, 3, 3});
    auto r = reduce(c, 0, std::vector<Symbol>{1, 0});
    CHECK(r.row(0) == 1);
    CHECK(r.row(1) == 1);

    // P=0 A=1 B=2 F=3; P always selects A
    SocModel m(DiGraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}, {1, 2}, {2, 1}}));
    auto w = m.table();
    Symbol select_a = m.selection_symbol(0, 1);
    auto reduced = reduce(w, 0, std::vector<Symbol>{select_a, select_a});
    for (std::uint64_t o = 0; o < reduced.outputs().total(); ++o) {
        auto rest = reduced.outputs().decode(o);
        auto i = reduced.apply(rest);
        CHECK(i[0] == (m.selected_child(2, rest[1]) == 1 ? 1U : 0U));
        CHECK(i[1] == 0);
        CHECK(i[2] == 0);
    }

    CHECK_THROWS_AS(reduce(identity(), 0, std::vector<Symbol>{0, 1}), InputError);
    ProcessTable self_reading(two, {0, 1, 2, 3});
    CHECK_THROWS_AS(reduce(self_reading, 0, std::vector<Symbol>{0, 1}), InputError);
    CHECK_THROWS_AS(reduce(c, 2, std::vector<Symbol>{0, 1}), InputError);
    CHECK_THROWS_AS(reduce(c, 0, std::vector<Symbol>{0}), InputError);
}

TEST_CASE("diagonal lift")
{
    auto l = quantum_lift(constant(0));
    CHECK(l == std::vector<LiftEntry>{{{0}, {0}}, {{1}, {0}}});

    Alphabet two{{2, 2}, {2, 2}};
    ProcessTable swap(two, {0, 2, 1, 3});
    auto s = quantum_lift(swap);
    std::vector<LiftEntry> expected{{{0, 0}, {0, 0}}, {{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}, {{1, 1}, {1, 1}}};
    CHECK(s == expected);

    auto w = SocModel(DiGraph(3, {{0, 1}, {0, 2}, {1, 2}})).table();
    CHECK(quantum_lift(w).size() == w.outputs().total());
}

TEST_CASE("shape errors")
{
    CHECK_THROWS_AS(ProcessTable(Alphabet{{2}, {2}}, {0}), InputError);
    CHECK_THROWS_AS(ProcessTable(Alphabet{{2}, {2}}, {0, 2}), InputError);
    CHECK_THROWS_AS(ProcessTable(Alphabet{{0}, {2}}, {}), InputError);
}
