#pragma once

#include <causal/digraph.hh>
#include <causal/process.hh>

#include <optional>
#include <span>
#include <vector>

namespace causal
{
    /// Output symbol meaning "select no child".
    inline constexpr Symbol bottom = 0;

    /**
     * Canonical selection model on a self-loop-free graph. Every party k
     * receives one bit, I_k = {0,1}, and emits a choice of at most one child,
     * O_k = Ch(k) + {bottom}. Symbol 0 is bottom and child c is 1 + its rank
     * in ascending Ch(k). Party k receives 1 iff every parent selects k, so
     * parentless parties always receive 1.
     */
    class SocModel
    {
    public:
        /// Throws InputError if g has a self-loop.
        explicit SocModel(DiGraph g);

        auto graph() const -> const DiGraph & { return _graph; }
        auto parties() const -> int { return _graph.size(); }
        auto children(Node k) const -> const std::vector<Node> & { return _children.at(k); }
        auto output_size(Node k) const -> std::uint32_t { return static_cast<std::uint32_t>(_children.at(k).size()) + 1; }

        /// Symbol with which `parent` selects `child`.
        auto selection_symbol(Node parent, Node child) const -> Symbol;

        /// Child selected by symbol s of party k, or nothing for bottom.
        auto selected_child(Node k, Symbol s) const -> std::optional<Node>;

        auto alphabet() const -> Alphabet;

        /// i_k as a function of the joint output.
        auto input_for(Node k, std::span<const Symbol> outputs) const -> Symbol;

        /// Full tabulation over all joint outputs.
        auto table() const -> ProcessTable;

    private:
        DiGraph _graph;
        std::vector<std::vector<Node>> _children;
    };

    auto build_model(const DiGraph & g) -> SocModel;

    /// Every edge l->k can carry a bit: some pair of parent selections differing only at l flips i_k.
    auto check_faithfulness(const SocModel & m) -> bool;

    /**
     * The path recursion predicting the fixed point:
     *
     *     value(k, path) = [k not on path] * prod_{l in Pa(k)} [mu_l(value(l, (k, path))) selects k]
     *
     * Revisiting a node yields 0, so the recursion terminates. Evaluated
     * literally, without caching across paths.
     */
    auto recursive_input(const SocModel & m, const Experiment & mu, Node k, std::span<const Node> path) -> Symbol;

    /// value(k, empty path) for every party.
    auto recursive_fixed_point(const SocModel & m, const Experiment & mu) -> Assignment;

    struct ConsistencyVerdict
    {
        enum class Kind
        {
            consistent,
            counterexample,
            skipped
        };

        Kind kind = Kind::consistent;
        /// First experiment (lexicographic) without a unique fixed point, or
        /// whose unique fixed point disagrees with the path recursion.
        std::optional<Experiment> mu;
        std::vector<Assignment> fixed_points;
        Assignment recursive_point;
        std::uint64_t experiments = 0;
    };

    auto to_string(ConsistencyVerdict::Kind kind) -> const char *;

    struct VerifyOptions
    {
        ScanOptions scan;
        /// Scan graphs that are not siblings-on-cycles instead of skipping them.
        bool force = false;
    };

    /**
     * Builds the selection model on g and scans every experiment. Consistent
     * iff each experiment has exactly one fixed point and it equals the
     * recursive prediction. Throws BudgetExceeded and InputError (self-loops).
     */
    auto verify_consistency(const DiGraph & g, const VerifyOptions & options = {}) -> ConsistencyVerdict;
}
