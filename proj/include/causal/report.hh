#pragma once

#include <causal/correlations.hh>
#include <causal/enumeration.hh>
#include <causal/games.hh>
#include <causal/soc_model.hh>

#include <json.hpp>

#include <string>

namespace causal
{
    using Json = nlohmann::ordered_json;

    auto rational_json(const Rational & r) -> Json;
    auto assignment_json(const Assignment & a) -> Json;
    auto experiment_json(const Experiment & mu) -> Json;
    auto graph_json(const DiGraph & g) -> Json;

    /// {kind, experiments} plus, for a counterexample, {mu, fixed_points, alpha_point}.
    auto verdict_json(const ConsistencyVerdict & v) -> Json;

    /// Single-line JSON object for one survey record.
    auto record_json(const ClassificationRecord & r) -> Json;

    /// Inverse of record_json. Throws InputError on malformed input.
    auto record_from_json(const Json & j) -> ClassificationRecord;

    auto record_tsv_header() -> std::string;
    auto record_tsv(const ClassificationRecord & r) -> std::string;

    auto summary_json(const SurveySummary & s) -> Json;

    /// Lines "x-tuple <tab> a-tuple <tab> num <tab> den", tuples comma separated.
    auto correlation_tsv(const CorrelationTable & t) -> std::string;
    /// Nonzero entries only.
    auto correlation_json(const CorrelationTable & t) -> Json;

    auto decomposition_json(const CausalDecomposition & d) -> Json;

    /// {n, S, bound, win, violated} and, when a strategy is given, its roles.
    auto game_json(const GameSpec & spec, const Rational & win, const Strategy * strategy = nullptr) -> Json;
}
