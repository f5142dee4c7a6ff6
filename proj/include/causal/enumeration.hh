#pragma once

#include <causal/canonical.hh>
#include <causal/digraph.hh>
#include <causal/process.hh>
#include <causal/rational.hh>
#include <causal/soc_model.hh>

#include <optional>
#include <set>
#include <vector>

namespace causal
{
    struct EnumerationOptions
    {
        bool allow_self_loops = false;
        /// Seven nodes take days; refuse unless asked.
        bool allow_seven = false;
        unsigned jobs = 1;
    };

    /**
     * One canonical representative per isomorphism class, ascending. Up to
     * five nodes every labelled graph is tested for being its own canonical
     * form; beyond that each class is grown from the classes one node
     * smaller by attaching a new node, and deduplicated. Throws
     * BudgetExceeded for n = 7 without the override and InputError for n > 7.
     */
    auto enumerate_digraphs(int n, const EnumerationOptions & options = {}) -> std::vector<CanonicalForm>;

    struct GameOutcome
    {
        NodeSet players;
        Rational bound;
        /// Empty when some referee draw had no unique fixed point.
        std::optional<Rational> win;

        auto violated() const -> bool { return win && *win > bound; }
    };

    /// Everything the survey knows about one isomorphism class.
    struct ClassificationRecord
    {
        CanonicalForm form;
        bool soc = false;
        bool chordless_soc = false;
        /// Only recorded for SOC graphs.
        std::optional<Cycle> violation_cycle;
        std::optional<Node> source;
        std::optional<ConsistencyVerdict> verdict;
        bool budget_exceeded = false;
        std::optional<GameOutcome> game;
    };

    struct ClassifyOptions
    {
        bool verify = false;
        bool games = false;
        ScanOptions scan;
    };

    /**
     * Flags, and optionally a forced consistency scan and the violation game.
     * Budget failures are recorded. Throws InvariantViolation when a
     * chordless SOC graph has a counterexample or a non-SOC graph scans
     * consistent.
     */
    auto classify(const DiGraph & g, const ClassifyOptions & options = {}) -> ClassificationRecord;

    struct SurveyOptions
    {
        ClassifyOptions classify;
        bool allow_self_loops = false;
        bool allow_seven = false;
        unsigned jobs = 1;
        /// Classes already done; left out of the result.
        std::set<CanonicalForm> skip;
    };

    struct SurveySummary
    {
        std::uint64_t classes = 0;
        std::uint64_t soc = 0;
        std::uint64_t chordless_soc = 0;
        std::uint64_t violation = 0;
        std::uint64_t consistent = 0;
        std::uint64_t inadmissible = 0;
        std::uint64_t budget_exceeded = 0;
        std::uint64_t games_played = 0;
        std::uint64_t games_violated = 0;

        auto add(const ClassificationRecord & r) -> void;
        /// "16 classes, 8 soc, 8 consistent, 8 inadmissible" with verification, flag counts without.
        auto to_string(bool verified) const -> std::string;
    };

    /// Records in ascending canonical order, independent of the worker count.
    auto survey(int n, const SurveyOptions & options = {}) -> std::vector<ClassificationRecord>;

    auto summarize(const std::vector<ClassificationRecord> & records) -> SurveySummary;
}
