#include <causal/digraph.hh>
#include <causal/errors.hh>

#include <algorithm>
#include <string>

using namespace causal;

auto NodeSet::to_vector() const -> std::vector<Node>
{
    std::vector<Node> result;
    result.reserve(size());
    for (auto v : *this)
        result.push_back(v);
    return result;
}

DiGraph::DiGraph(int n) :
    _n(n),
    _out(n > 0 ? n : 0),
    _in(n > 0 ? n : 0)
{
    if (n < 1 || n > max_nodes)
        throw InputError("node count must be in 1.." + std::to_string(max_nodes) + ", got " + std::to_string(n));
}

DiGraph::DiGraph(int n, std::initializer_list<std::pair<Node, Node>> edges) :
    DiGraph(n)
{
    for (auto [u, v] : edges)
        add_edge(u, v);
}

auto DiGraph::check(Node k) const -> void
{
    if (k < 0 || k >= _n)
        throw InputError("node id " + std::to_string(k) + " out of range for graph on " + std::to_string(_n) + " nodes");
}

auto DiGraph::add_edge(Node from, Node to) -> void
{
    check(from);
    check(to);
    _out[from] |= std::uint64_t{1} << to;
    _in[to] |= std::uint64_t{1} << from;
}

auto DiGraph::remove_edge(Node from, Node to) -> void
{
    check(from);
    check(to);
    _out[from] &= ~(std::uint64_t{1} << to);
    _in[to] &= ~(std::uint64_t{1} << from);
}

auto DiGraph::has_edge(Node from, Node to) const -> bool
{
    check(from);
    check(to);
    return (_out[from] >> to) & 1U;
}

auto DiGraph::children(Node k) const -> NodeSet
{
    check(k);
    return NodeSet::from_bits(_out[k]);
}

auto DiGraph::parents(Node k) const -> NodeSet
{
    check(k);
    return NodeSet::from_bits(_in[k]);
}

auto DiGraph::in_degree(Node k) const -> int
{
    return parents(k).size();
}

auto DiGraph::ancestors(Node k) const -> NodeSet
{
    return ancestors(NodeSet{k});
}

auto DiGraph::ancestors(NodeSet s) const -> NodeSet
{
    if (! s.is_subset_of(nodes()))
        throw InputError("node set contains ids outside the graph");

    NodeSet result, frontier;
    for (auto v : s)
        frontier |= NodeSet::from_bits(_in[v]);
    while (! (frontier - result).empty()) {
        NodeSet fresh = frontier - result;
        result |= fresh;
        frontier = NodeSet{};
        for (auto v : fresh)
            frontier |= NodeSet::from_bits(_in[v]);
    }
    return result;
}

auto DiGraph::edge_count() const -> int
{
    int count = 0;
    for (auto row : _out)
        count += std::popcount(row);
    return count;
}

auto DiGraph::edges() const -> std::vector<std::pair<Node, Node>>
{
    std::vector<std::pair<Node, Node>> result;
    for (Node u = 0; u < _n; ++u)
        for (auto v : NodeSet::from_bits(_out[u]))
            result.emplace_back(u, v);
    return result;
}

auto DiGraph::has_self_loop() const -> bool
{
    for (Node u = 0; u < _n; ++u)
        if ((_out[u] >> u) & 1U)
            return true;
    return false;
}

auto DiGraph::induced(NodeSet keep) const -> DiGraph
{
    if (keep.empty() || ! keep.is_subset_of(nodes()))
        throw InputError("induced subgraph needs a nonempty subset of the nodes");

    std::vector<Node> index(_n, -1);
    int next = 0;
    for (auto v : keep)
        index[v] = next++;

    DiGraph result(next);
    for (auto u : keep)
        for (auto v : NodeSet::from_bits(_out[u]) & keep)
            result.add_edge(index[u], index[v]);
    return result;
}

auto DiGraph::permuted(std::span<const Node> perm) const -> DiGraph
{
    if (static_cast<int>(perm.size()) != _n)
        throw InputError("permutation length does not match node count");
    NodeSet seen;
    for (auto p : perm) {
        check(p);
        seen.insert(p);
    }
    if (seen != nodes())
        throw InputError("not a permutation");

    DiGraph result(_n);
    for (auto [u, v] : edges())
        result.add_edge(perm[u], perm[v]);
    return result;
}

auto causal::common_parents(const DiGraph & g, NodeSet s) -> NodeSet
{
    // a node is a common parent iff it points at two or more members of s
    NodeSet result;
    for (Node p = 0; p < g.size(); ++p)
        if ((g.children(p) & s).size() >= 2)
            result.insert(p);
    return result;
}

auto Cycle::node_set() const -> NodeSet
{
    NodeSet result;
    for (auto v : nodes)
        result.insert(v);
    return result;
}

auto Cycle::to_string() const -> std::string
{
    std::string result = "(";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i)
            result += ",";
        result += std::to_string(nodes[i]);
    }
    return result + ")";
}

auto causal::make_cycle(std::vector<Node> nodes) -> Cycle
{
    auto m = std::min_element(nodes.begin(), nodes.end());
    std::rotate(nodes.begin(), m, nodes.end());
    return Cycle{std::move(nodes)};
}

namespace
{
    auto extend_paths(const DiGraph & g, Node start, NodeSet allowed, std::vector<Node> & path, NodeSet on_path,
            std::vector<Cycle> & out) -> void
    {
        Node last = path.back();
        for (auto next : g.children(last) & allowed) {
            if (next == start)
                out.push_back(Cycle{path});
            else if (! on_path.contains(next)) {
                path.push_back(next);
                NodeSet extended = on_path;
                extended.insert(next);
                extend_paths(g, start, allowed, path, extended, out);
                path.pop_back();
            }
        }
    }
}

auto causal::enumerate_cycles(const DiGraph & g) -> std::vector<Cycle>
{
    // Each cycle is found exactly once: from its minimal node, through larger
    // nodes only, which is already the canonical rotation.
    std::vector<Cycle> result;
    for (Node s = 0; s < g.size(); ++s) {
        NodeSet allowed = g.nodes() - NodeSet::range(s);
        std::vector<Node> path{s};
        extend_paths(g, s, allowed, path, NodeSet{s}, result);
    }
    std::sort(result.begin(), result.end());
    return result;
}

auto causal::is_cycle_of(const DiGraph & g, const Cycle & c) -> bool
{
    if (c.nodes.empty())
        return false;
    NodeSet seen;
    for (auto v : c.nodes) {
        if (v < 0 || v >= g.size() || seen.contains(v))
            return false;
        seen.insert(v);
    }
    for (std::size_t i = 0; i < c.nodes.size(); ++i)
        if (! g.has_edge(c.nodes[i], c.nodes[(i + 1) % c.nodes.size()]))
            return false;
    return true;
}

namespace
{
    auto require_cycle(const DiGraph & g, const Cycle & c) -> void
    {
        if (! is_cycle_of(g, c))
            throw InputError(c.to_string() + " is not a directed cycle of the graph");
    }

    auto induced_edge_count(const DiGraph & g, NodeSet s) -> int
    {
        int count = 0;
        for (auto v : s)
            count += (g.children(v) & s).size();
        return count;
    }
}

auto causal::is_induced_cycle(const DiGraph & g, const Cycle & c) -> bool
{
    require_cycle(g, c);
    return induced_edge_count(g, c.node_set()) == c.size();
}

auto causal::is_soc(const DiGraph & g) -> bool
{
    for (auto & c : enumerate_cycles(g))
        if (common_parents(g, c.node_set()).empty())
            return false;
    return true;
}

auto causal::is_chordless_soc(const DiGraph & g) -> bool
{
    for (auto & c : enumerate_cycles(g)) {
        NodeSet s = c.node_set();
        if (common_parents(g, s).empty() || induced_edge_count(g, s) != c.size())
            return false;
    }
    return true;
}

auto causal::find_source(const DiGraph & g) -> std::optional<Node>
{
    for (Node k = 0; k < g.size(); ++k)
        if (g.parents(k).empty())
            return k;
    return std::nullopt;
}

auto causal::copa_ancestor_subgraph(const DiGraph & g, const Cycle & c) -> NodeSet
{
    require_cycle(g, c);
    NodeSet copa = common_parents(g, c.node_set());
    return copa | g.ancestors(copa);
}

auto causal::find_violation_cycle(const DiGraph & g) -> std::optional<Cycle>
{
    for (auto & c : enumerate_cycles(g)) {
        NodeSet s = c.node_set();
        NodeSet copa = common_parents(g, s);
        if (! copa.empty() && copa.is_subset_of(s))
            return c;
    }
    return std::nullopt;
}
