#pragma once

#include <causal/digraph.hh>
#include <causal/process.hh>
#include <causal/rational.hh>

#include <optional>

namespace causal
{
    /**
     * The guessing game on n parties with player set S. The referee draws
     * (s, b) uniformly from S x {0,1}, hands s to every player and b to every
     * player other than s. Party s wins by outputting b.
     *
     * A setting is a pair (u, v) with u in {0..n-1, none} and v in
     * {0, 1, none}, encoded as u * 3 + v where "none" is the last symbol of
     * each slot (u = n, v = 2).
     */
    class GameSpec
    {
    public:
        /// Throws InputError if S is empty or names parties outside 0..n-1.
        GameSpec(int n, NodeSet players);

        auto parties() const -> int { return _n; }
        auto players() const -> NodeSet { return _players; }

        /// 2|S| equally likely referee draws.
        auto referee_draws() const -> int { return 2 * _players.size(); }

        auto setting_size() const -> std::uint32_t { return static_cast<std::uint32_t>((_n + 1) * 3); }
        auto encode_setting(std::optional<int> party, std::optional<int> bit) const -> Symbol;
        auto decode_setting(Symbol x) const -> std::pair<std::optional<int>, std::optional<int>>;

        /// Joint setting the referee distributes for the draw (s, b).
        auto settings_for(int s, int b) const -> Assignment;

    private:
        int _n;
        NodeSet _players;
    };

    /// 1 - 1/(2|S|), the best winning probability reachable with causal correlations.
    auto causal_bound(const GameSpec & spec) -> Rational;
}
