#pragma once

#include <causal/correlations.hh>
#include <causal/digraph.hh>
#include <causal/game_spec.hh>
#include <causal/process.hh>
#include <causal/rational.hh>

#include <cstdint>
#include <random>
#include <vector>

namespace causal
{
    /// Who does what once the referee has named s.
    struct StrategyRoles
    {
        Node target;
        /// The cycle predecessor of target; it carries b.
        Node predecessor;
        /// Cycle parents of target other than the predecessor; they always select target.
        NodeSet helpers;
    };

    /**
     * Deterministic instruments over the game's settings, together with the
     * cycle they signal along. Parties in `outside_parents` have exactly one
     * child on the cycle and always select it.
     */
    struct Strategy
    {
        Instrument instrument;
        Cycle cycle;
        NodeSet outside_parents;
        std::vector<StrategyRoles> roles;
    };

    /**
     * Strategy for a cycle whose common parents are nonempty and lie on the
     * cycle. The predecessor of s selects s iff b = 1, helpers and outside
     * parents select s, the other cycle parties forward to their successor
     * iff their input is 1 and everybody else selects nothing. Every party
     * reports its input as outcome. Throws InputError if the preconditions
     * fail or the players are not the cycle's nodes.
     */
    auto build_violation_strategy(const DiGraph & g, const Cycle & c, const GameSpec & spec) -> Strategy;

    /// Exact winning probability. Throws InputError if some referee draw does not have exactly one fixed point.
    auto play(const GameSpec & spec, const ProcessTable & w, const Instrument & inst) -> Rational;
    auto play(const GameSpec & spec, const ProcessTable & w, const Strategy & strategy) -> Rational;

    /// Uniformly random deterministic instruments over the game alphabets, with two outcomes per party.
    auto random_instrument(const GameSpec & spec, const Alphabet & alphabet, std::mt19937_64 & rng) -> Instrument;

    struct StrategySearch
    {
        Rational best{0};
        std::uint64_t samples = 0;
    };

    /// Best win probability over `samples` random instruments drawn from `seed`.
    auto random_strategy_search(const GameSpec & spec, const ProcessTable & w, std::uint64_t samples,
            std::uint64_t seed) -> StrategySearch;
}
