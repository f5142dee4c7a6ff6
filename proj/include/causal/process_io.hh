#pragma once

#include <causal/process.hh>

#include <istream>
#include <string>

namespace causal
{
    /**
     * Process table text format:
     *
     *     n
     *     |I_k| |O_k|                  one line per party
     *     o_0 ... o_{n-1} : i_0 ... i_{n-1}   one line per joint output
     *
     * Rows may appear in any order but each joint output exactly once.
     * Lines starting with '#' and blank lines are skipped.
     */
    auto parse_process(std::istream & in) -> ProcessTable;
    auto parse_process(const std::string & text) -> ProcessTable;
    auto read_process_file(const std::string & path) -> ProcessTable;

    /// Writes rows in lexicographic order of the joint output.
    auto format_process(const ProcessTable & w) -> std::string;

    /**
     * Experiment file: one line per party listing mu_k(0) ... mu_k(|I_k|-1).
     * Comments and blank lines as above.
     */
    auto parse_experiment(std::istream & in) -> Experiment;
    auto parse_experiment(const std::string & text) -> Experiment;
    auto read_experiment_file(const std::string & path) -> Experiment;
    auto format_experiment(const Experiment & mu) -> std::string;
}
