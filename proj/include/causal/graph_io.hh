#pragma once

#include <causal/digraph.hh>

#include <istream>
#include <string>

namespace causal
{
    /**
     * Reads the edge-list format:
     *
     *     # comment lines start with '#'
     *     n
     *     u v        one edge u->v per line, 0-indexed
     *
     * Blank lines are ignored. Duplicate edges, bad ids and trailing tokens
     * raise InputError naming the offending line.
     */
    auto parse_graph(std::istream & in) -> DiGraph;
    auto parse_graph(const std::string & text) -> DiGraph;
    auto read_graph_file(const std::string & path) -> DiGraph;

    auto format_graph(const DiGraph & g) -> std::string;
}
