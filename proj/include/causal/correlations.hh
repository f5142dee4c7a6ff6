#pragma once

#include <causal/digraph.hh>
#include <causal/game_spec.hh>
#include <causal/process.hh>
#include <causal/rational.hh>

#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace causal
{
    /**
     * Deterministic local instruments mu_k: I_k x X_k -> O_k x A_k. The
     * table of party k stores, for setting x and input i, the pair
     * (output, outcome) at position x * |I_k| + i.
     */
    struct Instrument
    {
        std::vector<std::uint32_t> input_sizes;
        std::vector<std::uint32_t> setting_sizes;
        std::vector<std::uint32_t> outcome_sizes;
        std::vector<std::vector<std::pair<Symbol, Symbol>>> tables;

        auto parties() const -> int { return static_cast<int>(tables.size()); }

        /// All-zero instrument of the given shape.
        static auto blank(std::vector<std::uint32_t> inputs, std::vector<std::uint32_t> settings,
                std::vector<std::uint32_t> outcomes) -> Instrument;

        auto entry(int k, Symbol x, Symbol i) const -> const std::pair<Symbol, Symbol> &
        {
            return tables[k][x * input_sizes[k] + i];
        }
        auto entry(int k, Symbol x, Symbol i) -> std::pair<Symbol, Symbol> &
        {
            return tables[k][x * input_sizes[k] + i];
        }

        /// The output components at a fixed joint setting, as a plain experiment.
        auto experiment_at(std::span<const Symbol> settings) const -> Experiment;

        /// Copy without party k.
        auto without(int k) const -> Instrument;
    };

    /// Throws InputError unless `inst` fits the process alphabet and is total.
    auto check_instrument(const Alphabet & alphabet, const Instrument & inst) -> void;

    /**
     * Instrument text format:
     *
     *     n
     *     |X_k| |A_k|                 one line per party
     *     o/a o/a ...                 per party, one line per setting, |I_k| entries
     */
    auto parse_instrument(std::istream & in) -> Instrument;
    auto read_instrument_file(const std::string & path) -> Instrument;
    auto format_instrument(const Instrument & inst) -> std::string;

    /// p(a|x) over joint outcomes a and joint settings x.
    class CorrelationTable
    {
    public:
        CorrelationTable(MixedRadix settings, MixedRadix outcomes);

        auto settings() const -> const MixedRadix & { return _settings; }
        auto outcomes() const -> const MixedRadix & { return _outcomes; }

        auto at(std::uint64_t x, std::uint64_t a) const -> const Rational & { return _entries[x * _outcomes.total() + a]; }
        auto at(std::uint64_t x, std::uint64_t a) -> Rational & { return _entries[x * _outcomes.total() + a]; }
        auto column_sum(std::uint64_t x) const -> Rational;

        /// Every column is a probability distribution.
        auto normalized() const -> bool;

        friend auto operator==(const CorrelationTable &, const CorrelationTable &) -> bool = default;

    private:
        MixedRadix _settings, _outcomes;
        std::vector<Rational> _entries;
    };

    /// Largest correlation table `evaluate` will materialise.
    inline constexpr std::uint64_t max_table_entries = 1U << 24;

    /// Number of (i, o) pairs with omega(o) = i and mu(x, i) = (o, a), per joint outcome a.
    auto evaluate_column(const ProcessTable & w, const Instrument & inst, std::span<const Symbol> settings)
            -> std::vector<std::uint64_t>;

    /**
     * The link product of omega with the instrument, for every joint setting.
     * For an invalid omega columns may sum to 0 or more than 1; check
     * `normalized()`.
     */
    auto evaluate(const ProcessTable & w, const Instrument & inst) -> CorrelationTable;

    /**
     * Causal decomposition by leader peeling. A node covers `parties`
     * (global ids, ascending); its leader's marginal p(a_k|x_k) is stored
     * row-major over (x_k, a_k), and for every pair with nonzero marginal
     * the decomposition of the remaining parties follows in `branches`.
     * Deterministic processes always peel with a single leader of weight 1.
     */
    struct CausalDecomposition
    {
        std::vector<int> parties;
        Rational weight{1};
        int leader = -1;
        std::uint32_t setting_size = 0;
        std::uint32_t outcome_size = 0;
        std::vector<Rational> marginal;
        std::vector<std::pair<Symbol, Symbol>> branch_keys;
        std::vector<CausalDecomposition> branches;

        auto marginal_at(Symbol x, Symbol a) const -> const Rational & { return marginal[x * outcome_size + a]; }
    };

    /// Edge j -> k when changing o_j alone can change omega_k.
    auto signalling_graph(const ProcessTable & w) -> DiGraph;

    /**
     * Peels sources off a chordless siblings-on-cycles causal structure `g`
     * of the valid process `w`. Each step fixes the source's setting,
     * reduces the process and recurses on the remaining parties, whose
     * structure is the signalling graph of the reduced process restricted
     * to the edges `g` allows. Throws
     * InputError when the preconditions fail at the top level and
     * InvariantViolation when a peeled structure loses the property.
     */
    auto peel_decompose(const ProcessTable & w, const DiGraph & g, const Instrument & inst,
            const ScanOptions & options = {}) -> CausalDecomposition;

    /// Rebuilds p(a|x) for the settings/outcome shape of `inst`.
    auto reconstruct(const CausalDecomposition & d, const Instrument & inst) -> CorrelationTable;

    /**
     * Best winning probability of the guessing game over deterministic
     * strategies with a fixed party order, maximised over all orders. Each
     * party may use the settings and outcomes of every earlier party.
     * Throws BudgetExceeded when n! * 2^(2|S| n) exceeds the scan budget.
     */
    auto max_causal_game_value(const GameSpec & spec, const ScanOptions & options = {}) -> Rational;
}
