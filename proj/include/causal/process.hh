#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace causal
{
    using Symbol = std::uint32_t;

    /// One symbol per party, party 0 first.
    using Assignment = std::vector<Symbol>;

    /**
     * Mixed-radix indexing of joint assignments. Party 0 is the most
     * significant digit, so index order is lexicographic order.
     */
    class MixedRadix
    {
    public:
        MixedRadix() = default;
        explicit MixedRadix(std::vector<std::uint32_t> sizes);

        auto digits() const -> int { return static_cast<int>(_sizes.size()); }
        auto size(int k) const -> std::uint32_t { return _sizes[k]; }
        auto sizes() const -> const std::vector<std::uint32_t> & { return _sizes; }
        auto stride(int k) const -> std::uint64_t { return _strides[k]; }
        auto total() const -> std::uint64_t { return _total; }

        auto encode(std::span<const Symbol> digits) const -> std::uint64_t;
        auto decode(std::uint64_t index) const -> Assignment;
        auto digit(std::uint64_t index, int k) const -> Symbol { return static_cast<Symbol>((index / _strides[k]) % _sizes[k]); }

        friend auto operator==(const MixedRadix &, const MixedRadix &) -> bool = default;

    private:
        std::vector<std::uint32_t> _sizes;
        std::vector<std::uint64_t> _strides;
        std::uint64_t _total = 1;
    };

    /// Per-party input and output alphabet sizes; symbols are 0..size-1.
    struct Alphabet
    {
        std::vector<std::uint32_t> input_sizes;
        std::vector<std::uint32_t> output_sizes;

        auto parties() const -> int { return static_cast<int>(input_sizes.size()); }
        auto validate() const -> void;

        friend auto operator==(const Alphabet &, const Alphabet &) -> bool = default;
    };

    /// Local functions mu_k: I_k -> O_k, one table per party.
    struct Experiment
    {
        std::vector<std::vector<Symbol>> tables;

        auto parties() const -> int { return static_cast<int>(tables.size()); }
        auto operator()(std::span<const Symbol> inputs) const -> Assignment;
        auto to_string() const -> std::string;

        friend auto operator==(const Experiment &, const Experiment &) -> bool = default;
    };

    /// Throws InputError unless `mu` is total on the alphabet's inputs with outputs in range.
    auto check_experiment(const Alphabet & alphabet, const Experiment & mu) -> void;

    /**
     * A tabulated function omega from joint outputs to joint inputs. Row o
     * (in MixedRadix order over the output alphabets) stores the joint
     * input index omega(o).
     */
    class ProcessTable
    {
    public:
        ProcessTable(Alphabet alphabet, std::vector<std::uint64_t> rows);

        static auto from_function(Alphabet alphabet,
                const std::function<Assignment (std::span<const Symbol>)> & omega) -> ProcessTable;

        auto alphabet() const -> const Alphabet & { return _alphabet; }
        auto parties() const -> int { return _alphabet.parties(); }
        auto inputs() const -> const MixedRadix & { return _inputs; }
        auto outputs() const -> const MixedRadix & { return _outputs; }
        auto rows() const -> std::span<const std::uint64_t> { return _rows; }

        auto row(std::uint64_t output_index) const -> std::uint64_t { return _rows[output_index]; }
        auto apply(std::span<const Symbol> outputs) const -> Assignment;
        auto component(int k, std::uint64_t output_index) const -> Symbol { return _inputs.digit(_rows[output_index], k); }

        friend auto operator==(const ProcessTable &, const ProcessTable &) -> bool = default;

    private:
        Alphabet _alphabet;
        MixedRadix _inputs, _outputs;
        std::vector<std::uint64_t> _rows;
    };

    /// Controls for exhaustive scans over the experiment space.
    struct ScanOptions
    {
        /// Refuse scans costing more elementary steps than this.
        std::uint64_t budget = 1'000'000'000;
        bool unlimited = false;
        unsigned jobs = 1;
    };

    /// prod_k |O_k|^{|I_k|}, saturating at UINT64_MAX.
    auto experiment_count(const Alphabet & alphabet) -> std::uint64_t;

    /// Experiment number `index` in row-major lexicographic order over the tables.
    auto experiment_at(const Alphabet & alphabet, std::uint64_t index) -> Experiment;

    /// Each omega_k ignores o_k.
    auto is_nonsignaling(const ProcessTable & w) -> bool;

    auto fixed_points(const ProcessTable & w, const Experiment & mu) -> std::vector<Assignment>;
    auto count_fixed_points(const ProcessTable & w, const Experiment & mu) -> std::uint64_t;

    struct ProcessVerdict
    {
        bool valid = true;
        /// Lexicographically first experiment without a unique fixed point.
        std::optional<Experiment> counterexample;
        std::uint64_t fixed_point_count = 0;
    };

    /// Exhaustive uniqueness check over every experiment. Throws BudgetExceeded.
    auto is_process(const ProcessTable & w, const ScanOptions & options = {}) -> ProcessVerdict;

    struct AntinomyReport
    {
        /// Some experiment has no fixed point.
        bool grandparent = false;
        /// Some experiment has two or more fixed points.
        bool information = false;
        /// Set when the table is signaling, outside the class the equivalence is stated for.
        bool signaling_warning = false;

        auto equivalence_holds() const -> bool { return grandparent == information; }
    };

    auto antinomy_report(const ProcessTable & w, const ScanOptions & options = {}) -> AntinomyReport;
    auto antinomy_equivalence_holds(const ProcessTable & w, const ScanOptions & options = {}) -> bool;

    /**
     * Fixes party k's local function and removes k: the remaining parties
     * see omega evaluated with o_k = mu_k(omega_k(...)). Requires at least two
     * parties and a non-signaling table.
     */
    auto reduce(const ProcessTable & w, int k, std::span<const Symbol> mu_k) -> ProcessTable;

    /// Basis label of one unit diagonal entry |o><o| (x) |omega(o)><omega(o)|.
    struct LiftEntry
    {
        Assignment output;
        Assignment input;

        friend auto operator==(const LiftEntry &, const LiftEntry &) -> bool = default;
    };

    /// Sparse description of the diagonal operator lifting omega; one entry per joint output.
    auto quantum_lift(const ProcessTable & w) -> std::vector<LiftEntry>;
}
