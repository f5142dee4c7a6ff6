#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace causal
{
    using Node = int;

    /// Upper bound on the node count of a DiGraph; rows are single 64-bit words.
    inline constexpr int max_nodes = 64;

    /**
     * A set of node ids below max_nodes, stored as one bit word. Iteration
     * yields members in ascending order.
     */
    class NodeSet
    {
    public:
        constexpr NodeSet() = default;
        NodeSet(std::initializer_list<Node> nodes)
        {
            for (auto v : nodes)
                insert(v);
        }

        static constexpr auto from_bits(std::uint64_t bits) -> NodeSet
        {
            NodeSet s;
            s._bits = bits;
            return s;
        }

        /// {0, ..., n-1}
        static constexpr auto range(int n) -> NodeSet
        {
            return from_bits(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
        }

        constexpr auto bits() const -> std::uint64_t { return _bits; }
        constexpr auto contains(Node v) const -> bool { return (_bits >> v) & 1U; }
        constexpr auto insert(Node v) -> void { _bits |= std::uint64_t{1} << v; }
        constexpr auto erase(Node v) -> void { _bits &= ~(std::uint64_t{1} << v); }
        constexpr auto empty() const -> bool { return _bits == 0; }
        constexpr auto size() const -> int { return std::popcount(_bits); }
        constexpr auto first() const -> Node { return std::countr_zero(_bits); }

        constexpr auto is_subset_of(NodeSet o) const -> bool { return (_bits & ~o._bits) == 0; }
        constexpr auto intersects(NodeSet o) const -> bool { return (_bits & o._bits) != 0; }

        friend constexpr auto operator&(NodeSet a, NodeSet b) -> NodeSet { return from_bits(a._bits & b._bits); }
        friend constexpr auto operator|(NodeSet a, NodeSet b) -> NodeSet { return from_bits(a._bits | b._bits); }
        friend constexpr auto operator-(NodeSet a, NodeSet b) -> NodeSet { return from_bits(a._bits & ~b._bits); }
        auto operator&=(NodeSet o) -> NodeSet & { _bits &= o._bits; return *this; }
        auto operator|=(NodeSet o) -> NodeSet & { _bits |= o._bits; return *this; }
        friend constexpr auto operator==(NodeSet, NodeSet) -> bool = default;

        class iterator
        {
        public:
            using value_type = Node;
            using difference_type = std::ptrdiff_t;

            constexpr iterator() = default;
            constexpr explicit iterator(std::uint64_t rest) : _rest(rest) { }
            constexpr auto operator*() const -> Node { return std::countr_zero(_rest); }
            constexpr auto operator++() -> iterator & { _rest &= _rest - 1; return *this; }
            constexpr auto operator++(int) -> iterator { auto t = *this; ++*this; return t; }
            friend constexpr auto operator==(iterator, iterator) -> bool = default;

        private:
            std::uint64_t _rest = 0;
        };

        constexpr auto begin() const -> iterator { return iterator{_bits}; }
        constexpr auto end() const -> iterator { return iterator{}; }

        auto to_vector() const -> std::vector<Node>;

    private:
        std::uint64_t _bits = 0;
    };

    /**
     * Directed graph on nodes 0..n-1 with bit-row adjacency. Bit (i,j) set
     * iff the edge i->j is present. Self-loops are representable.
     */
    class DiGraph
    {
    public:
        explicit DiGraph(int n);
        DiGraph(int n, std::initializer_list<std::pair<Node, Node>> edges);

        auto size() const -> int { return _n; }

        auto add_edge(Node from, Node to) -> void;
        auto remove_edge(Node from, Node to) -> void;
        auto has_edge(Node from, Node to) const -> bool;

        auto children(Node k) const -> NodeSet;
        auto parents(Node k) const -> NodeSet;
        auto in_degree(Node k) const -> int;
        auto ancestors(Node k) const -> NodeSet;
        auto ancestors(NodeSet s) const -> NodeSet;

        auto nodes() const -> NodeSet { return NodeSet::range(_n); }
        auto edge_count() const -> int;
        auto edges() const -> std::vector<std::pair<Node, Node>>;
        auto has_self_loop() const -> bool;

        /// Subgraph induced by `keep`, relabelled to 0..|keep|-1 in ascending id order.
        auto induced(NodeSet keep) const -> DiGraph;

        /// Graph with every node v renamed to perm[v].
        auto permuted(std::span<const Node> perm) const -> DiGraph;

        friend auto operator==(const DiGraph &, const DiGraph &) -> bool = default;

    private:
        auto check(Node k) const -> void;

        int _n;
        std::vector<std::uint64_t> _out;
        std::vector<std::uint64_t> _in;
    };

    /// The union of Pa(i) & Pa(j) over distinct i, j in `s`.
    auto common_parents(const DiGraph & g, NodeSet s) -> NodeSet;

    /// A directed cycle, rotated so that it starts at its smallest node.
    struct Cycle
    {
        std::vector<Node> nodes;

        auto size() const -> int { return static_cast<int>(nodes.size()); }
        auto node_set() const -> NodeSet;
        auto to_string() const -> std::string;

        friend auto operator<=>(const Cycle &, const Cycle &) = default;
        friend auto operator==(const Cycle &, const Cycle &) -> bool = default;
    };

    /// Rotates a node sequence so that it starts at its minimal id.
    auto make_cycle(std::vector<Node> nodes) -> Cycle;

    /// Every elementary circuit of g exactly once, in lexicographic order.
    auto enumerate_cycles(const DiGraph & g) -> std::vector<Cycle>;

    auto is_cycle_of(const DiGraph & g, const Cycle & c) -> bool;

    /// True iff G[c] carries exactly the cycle's own edges. Throws InputError if c is not a cycle of g.
    auto is_induced_cycle(const DiGraph & g, const Cycle & c) -> bool;

    /// Every directed cycle contains a pair of siblings.
    auto is_soc(const DiGraph & g) -> bool;

    /// SOC, and every directed cycle is induced.
    auto is_chordless_soc(const DiGraph & g) -> bool;

    /// Smallest node with in-degree zero.
    auto find_source(const DiGraph & g) -> std::optional<Node>;

    /// CoPa(c) together with all of its ancestors. Throws InputError if c is not a cycle of g.
    auto copa_ancestor_subgraph(const DiGraph & g, const Cycle & c) -> NodeSet;

    /// First cycle (in enumeration order) whose common parents are nonempty
    /// and all lie on the cycle itself. Such a cycle lets the parties win the
    /// guessing game deterministically.
    auto find_violation_cycle(const DiGraph & g) -> std::optional<Cycle>;
}
