#include <causal/graph_io.hh>
#include <causal/errors.hh>

#include <fstream>
#include <sstream>

using namespace causal;

namespace
{
    auto fail(int line_no, const std::string & why) -> InputError
    {
        return InputError("line " + std::to_string(line_no) + ": " + why);
    }

    auto is_skippable(const std::string & line) -> bool
    {
        auto p = line.find_first_not_of(" \t\r");
        return p == std::string::npos || line[p] == '#';
    }
}

auto causal::parse_graph(std::istream & in) -> DiGraph
{
    std::string line;
    int line_no = 0;
    std::optional<DiGraph> g;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable(line))
            continue;

        std::istringstream tokens(line);
        if (! g) {
            long long n;
            std::string extra;
            if (! (tokens >> n) || (tokens >> extra))
                throw fail(line_no, "expected the node count");
            if (n < 1 || n > max_nodes)
                throw fail(line_no, "node count must be in 1.." + std::to_string(max_nodes));
            g.emplace(static_cast<int>(n));
            continue;
        }

        long long u, v;
        std::string extra;
        if (! (tokens >> u >> v) || (tokens >> extra))
            throw fail(line_no, "expected an edge 'u v'");
        if (u < 0 || v < 0 || u >= g->size() || v >= g->size())
            throw fail(line_no, "node id out of range");
        if (g->has_edge(static_cast<Node>(u), static_cast<Node>(v)))
            throw fail(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
        g->add_edge(static_cast<Node>(u), static_cast<Node>(v));
    }

    if (! g)
        throw InputError("graph input is empty");
    return *g;
}

auto causal::parse_graph(const std::string & text) -> DiGraph
{
    std::istringstream in(text);
    return parse_graph(in);
}

auto causal::read_graph_file(const std::string & path) -> DiGraph
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open graph file " + path);
    try {
        return parse_graph(in);
    }
    catch (const InputError & e) {
        throw InputError(path + ": " + e.what());
    }
}

auto causal::format_graph(const DiGraph & g) -> std::string
{
    std::string out = std::to_string(g.size()) + "\n";
    for (auto [u, v] : g.edges())
        out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}
