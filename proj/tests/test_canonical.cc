#include <doctest.h>

#include <causal/canonical.hh>
#include <causal/enumeration.hh>
#include <causal/errors.hh>

#include "helpers.hh"

#include <numeric>
#include <set>

using namespace causal;

namespace
{
    /**
     * Orbit count of labelled digraphs under relabelling, by averaging the
     * number of graphs each permutation fixes: a graph is fixed iff it is
     * constant on every orbit of the permutation acting on node pairs.
     */
    auto burnside_count(int n, bool loops) -> std::uint64_t
    {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::uint64_t fixed = 0, perms = 0;
        do {
            std::set<std::pair<int, int>> seen;
            int orbits = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if ((i == j && ! loops) || seen.contains({i, j}))
                        continue;
                    ++orbits;
                    int a = i, b = j;
                    while (! seen.contains({a, b})) {
                        seen.insert({a, b});
                        a = perm[a];
                        b = perm[b];
                    }
                }
            fixed += std::uint64_t{1} << orbits;
            ++perms;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return fixed / perms;
    }
}

TEST_CASE("bit strings")
{
    DiGraph g(2, {{0, 1}});
    CHECK(adjacency_code(g).to_string() == "0100");
    CHECK(canonical_form(g).to_string() == "0010");
    CHECK(CanonicalForm::parse("0010").to_graph() == DiGraph(2, {{1, 0}}));
    CHECK_THROWS_AS(CanonicalForm::parse("010"), InputError);
    CHECK_THROWS_AS(CanonicalForm::parse("01x0"), InputError);
    CHECK_THROWS_AS(canonical_form(DiGraph(9)), InputError);
}

TEST_CASE("isomorphic single edges share a form")
{
    CHECK(canonical_form(DiGraph(2, {{0, 1}})) == canonical_form(DiGraph(2, {{1, 0}})));
    CHECK(canonical_form(DiGraph(2, {{0, 1}})) != canonical_form(DiGraph(2, {{0, 1}, {1, 0}})));
}

TEST_CASE("canonical form is a relabelling invariant")
{
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 7; ++n)
        for (int trial = 0; trial < 25; ++trial) {
            auto g = causal::testing::random_graph(n, 0.4, rng, trial % 3 == 0);
            auto f = canonical_form(g);
            CHECK(is_canonical(f));
            CHECK(canonical_form(f.to_graph()) == f);
            CHECK(canonical_form(g.permuted(causal::testing::random_permutation(n, rng))) == f);
            CHECK(f <= adjacency_code(g));
        }
}

TEST_CASE("labelled graphs collapse to the orbit count")
{
    for (int n = 1; n <= 3; ++n) {
        std::set<CanonicalForm> forms;
        for (auto & g : causal::testing::all_labelled(n))
            forms.insert(canonical_form(g));
        CHECK(forms.size() == burnside_count(n, false));
    }
}

TEST_CASE("class counts agree with the orbit-counting oracle")
{
    CHECK(burnside_count(2, false) == 3);
    CHECK(burnside_count(3, false) == 16);
    for (int n = 1; n <= 5; ++n) {
        CAPTURE(n);
        CHECK(enumerate_digraphs(n).size() == burnside_count(n, false));
    }
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        CHECK(enumerate_digraphs(n, EnumerationOptions{true, false, 1}).size() == burnside_count(n, true));
    }
}
