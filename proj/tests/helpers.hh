#pragma once

#include <causal/canonical.hh>
#include <causal/digraph.hh>
#include <causal/correlations.hh>
#include <causal/enumeration.hh>
#include <causal/soc_model.hh>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace causal::testing
{
    inline auto random_graph(int n, double density, std::mt19937_64 & rng, bool loops = false) -> DiGraph
    {
        std::bernoulli_distribution edge(density);
        DiGraph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if ((loops || u != v) && edge(rng))
                    g.add_edge(u, v);
        return g;
    }

    inline auto random_permutation(int n, std::mt19937_64 & rng) -> std::vector<Node>
    {
        std::vector<Node> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        return p;
    }

    /// Every labelled loop-free graph on n nodes.
    inline auto all_labelled(int n) -> std::vector<DiGraph>
    {
        std::vector<std::pair<Node, Node>> slots;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (u != v)
                    slots.emplace_back(u, v);
        std::vector<DiGraph> result;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots.size()); ++bits) {
            DiGraph g(n);
            for (std::size_t s = 0; s < slots.size(); ++s)
                if ((bits >> s) & 1U)
                    g.add_edge(slots[s].first, slots[s].second);
            result.push_back(g);
        }
        return result;
    }

    /// One representative per class, loop-free.
    inline auto classes(int n) -> std::vector<DiGraph>
    {
        std::vector<DiGraph> result;
        for (auto & f : enumerate_digraphs(n))
            result.push_back(f.to_graph());
        return result;
    }

    /// All cycles by trying every ordering of every subset.
    inline auto brute_cycles(const DiGraph & g) -> std::vector<Cycle>
    {
        std::vector<Cycle> result;
        int n = g.size();
        for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << n); ++subset) {
            std::vector<Node> members = NodeSet::from_bits(subset).to_vector();
            // fix the smallest node first, permute the rest
            do {
                bool closed = true;
                for (std::size_t i = 0; i < members.size(); ++i)
                    closed = closed && g.has_edge(members[i], members[(i + 1) % members.size()]);
                if (closed)
                    result.push_back(Cycle{members});
            } while (std::next_permutation(members.begin() + 1, members.end()));
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    /**
     * Binary settings steer each party: on input 1 it selects its child of
     * rank x (wrapping around), on input 0 it selects nothing. The outcome
     * is the input.
     */
    inline auto steering_instrument(const SocModel & m) -> Instrument
    {
        int n = m.parties();
        auto inst = Instrument::blank(std::vector<std::uint32_t>(n, 2), std::vector<std::uint32_t>(n, 2),
                std::vector<std::uint32_t>(n, 2));
        for (int k = 0; k < n; ++k) {
            auto children = static_cast<Symbol>(m.children(k).size());
            for (Symbol x = 0; x < 2; ++x)
                for (Symbol i = 0; i < 2; ++i)
                    inst.entry(k, x, i) = {i == 1 && children ? 1 + x % children : bottom, i};
        }
        return inst;
    }

    /// Random deterministic instrument with the given setting and outcome sizes.
    inline auto random_instrument(const Alphabet & a, std::uint32_t settings, std::uint32_t outcomes,
            std::mt19937_64 & rng) -> Instrument
    {
        int n = a.parties();
        auto inst = Instrument::blank(a.input_sizes, std::vector<std::uint32_t>(n, settings),
                std::vector<std::uint32_t>(n, outcomes));
        for (int k = 0; k < n; ++k)
            for (auto & [o, r] : inst.tables[k]) {
                o = static_cast<Symbol>(rng() % a.output_sizes[k]);
                r = static_cast<Symbol>(rng() % outcomes);
            }
        return inst;
    }
}
