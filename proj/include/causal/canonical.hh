#pragma once

#include <causal/digraph.hh>

#include <compare>
#include <cstdint>
#include <string>

namespace causal
{
    /// Largest node count accepted by the exhaustive permutation scan.
    inline constexpr int max_canonical_nodes = 8;

    /**
     * Row-major adjacency bit-string of a graph on n <= 8 nodes, packed into
     * one word with bit (0,0) most significant. Comparing codes of equal n
     * numerically is the same as comparing the bit-strings lexicographically.
     */
    struct CanonicalForm
    {
        int n = 0;
        std::uint64_t code = 0;

        auto to_string() const -> std::string;
        auto to_graph() const -> DiGraph;

        static auto parse(const std::string & bits) -> CanonicalForm;

        friend auto operator<=>(const CanonicalForm &, const CanonicalForm &) = default;
        friend auto operator==(const CanonicalForm &, const CanonicalForm &) -> bool = default;
    };

    /// The identity-labelled code of g.
    auto adjacency_code(const DiGraph & g) -> CanonicalForm;

    /// Lexicographically minimal adjacency code over all relabellings of g.
    auto canonical_form(const DiGraph & g) -> CanonicalForm;

    /// True iff no relabelling of the graph encoded by `code` yields a smaller code.
    auto is_canonical(const CanonicalForm & code) -> bool;
}
