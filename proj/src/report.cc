#include <causal/errors.hh>
#include <causal/report.hh>

#include <sstream>

using namespace causal;

namespace
{
    auto tuple(const Assignment & a) -> std::string
    {
        std::string s;
        for (std::size_t k = 0; k < a.size(); ++k)
            s += (k ? "," : "") + std::to_string(a[k]);
        return s;
    }

    auto nodes_json(NodeSet s) -> Json
    {
        Json j = Json::array();
        for (auto v : s)
            j.push_back(v);
        return j;
    }

    auto rational_from_json(const Json & j) -> Rational
    {
        return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
    }

    auto kind_from_string(const std::string & s) -> ConsistencyVerdict::Kind
    {
        for (auto k : {ConsistencyVerdict::Kind::consistent, ConsistencyVerdict::Kind::counterexample,
                    ConsistencyVerdict::Kind::skipped})
            if (s == to_string(k))
                return k;
        throw InputError("unknown verdict kind " + s);
    }
}

auto causal::rational_json(const Rational & r) -> Json
{
    return Json{{"num", r.numerator()}, {"den", r.denominator()}};
}

auto causal::assignment_json(const Assignment & a) -> Json
{
    return Json(a);
}

auto causal::experiment_json(const Experiment & mu) -> Json
{
    return Json(mu.tables);
}

auto causal::graph_json(const DiGraph & g) -> Json
{
    Json edges = Json::array();
    for (auto [u, v] : g.edges())
        edges.push_back({u, v});
    return Json{{"n", g.size()}, {"edges", edges}};
}

auto causal::verdict_json(const ConsistencyVerdict & v) -> Json
{
    Json j{{"kind", to_string(v.kind)}, {"experiments", v.experiments}};
    if (v.mu) {
        j["mu"] = experiment_json(*v.mu);
        Json points = Json::array();
        for (auto & p : v.fixed_points)
            points.push_back(assignment_json(p));
        j["fixed_points"] = points;
        j["alpha_point"] = assignment_json(v.recursive_point);
    }
    return j;
}

auto causal::record_json(const ClassificationRecord & r) -> Json
{
    Json j{{"form", r.form.to_string()}, {"n", r.form.n}, {"soc", r.soc}, {"chordless_soc", r.chordless_soc}};
    j["violation_cycle"] = r.violation_cycle ? Json(r.violation_cycle->nodes) : Json();
    j["source"] = r.source ? Json(*r.source) : Json();
    j["verdict"] = r.verdict ? verdict_json(*r.verdict) : Json();
    j["budget_exceeded"] = r.budget_exceeded;
    if (r.game) {
        j["game"] = Json{{"S", nodes_json(r.game->players)}, {"bound", rational_json(r.game->bound)},
            {"win", r.game->win ? rational_json(*r.game->win) : Json()}, {"violated", r.game->violated()}};
    }
    else
        j["game"] = Json();
    return j;
}

auto causal::record_from_json(const Json & j) -> ClassificationRecord
{
    try {
        ClassificationRecord r;
        r.form = CanonicalForm::parse(j.at("form").get<std::string>());
        if (j.at("n").get<int>() != r.form.n)
            throw InputError("record size does not match its form");
        r.soc = j.at("soc").get<bool>();
        r.chordless_soc = j.at("chordless_soc").get<bool>();
        if (! j.at("violation_cycle").is_null())
            r.violation_cycle = Cycle{j.at("violation_cycle").get<std::vector<Node>>()};
        if (! j.at("source").is_null())
            r.source = j.at("source").get<Node>();
        if (auto & v = j.at("verdict"); ! v.is_null()) {
            ConsistencyVerdict verdict;
            verdict.kind = kind_from_string(v.at("kind").get<std::string>());
            verdict.experiments = v.at("experiments").get<std::uint64_t>();
            if (v.contains("mu")) {
                verdict.mu = Experiment{v.at("mu").get<std::vector<std::vector<Symbol>>>()};
                verdict.fixed_points = v.at("fixed_points").get<std::vector<Assignment>>();
                verdict.recursive_point = v.at("alpha_point").get<Assignment>();
            }
            r.verdict = verdict;
        }
        r.budget_exceeded = j.at("budget_exceeded").get<bool>();
        if (auto & g = j.at("game"); ! g.is_null()) {
            GameOutcome outcome;
            for (auto v : g.at("S").get<std::vector<Node>>())
                outcome.players.insert(v);
            outcome.bound = rational_from_json(g.at("bound"));
            if (! g.at("win").is_null())
                outcome.win = rational_from_json(g.at("win"));
            r.game = outcome;
        }
        return r;
    }
    catch (const Json::exception & e) {
        throw InputError(std::string("malformed survey record: ") + e.what());
    }
}

auto causal::record_tsv_header() -> std::string
{
    return "form\tn\tsoc\tchordless_soc\tviolation_cycle\tsource\tverdict\tgame_win\tgame_bound";
}

auto causal::record_tsv(const ClassificationRecord & r) -> std::string
{
    std::ostringstream out;
    out << r.form.to_string() << '\t' << r.form.n << '\t' << r.soc << '\t' << r.chordless_soc << '\t'
        << (r.violation_cycle ? r.violation_cycle->to_string() : "-") << '\t'
        << (r.source ? std::to_string(*r.source) : "-") << '\t'
        << (r.budget_exceeded ? "over-budget" : r.verdict ? to_string(r.verdict->kind) : "-") << '\t';
    if (r.game)
        out << (r.game->win ? to_string(*r.game->win) : "invalid") << '\t' << to_string(r.game->bound);
    else
        out << "-\t-";
    return out.str();
}

auto causal::summary_json(const SurveySummary & s) -> Json
{
    return Json{{"summary", {{"classes", s.classes}, {"soc", s.soc}, {"chordless_soc", s.chordless_soc},
        {"violation_cycle", s.violation}, {"consistent", s.consistent}, {"inadmissible", s.inadmissible},
        {"budget_exceeded", s.budget_exceeded}, {"games_played", s.games_played},
        {"games_violated", s.games_violated}}}};
}

auto causal::correlation_tsv(const CorrelationTable & t) -> std::string
{
    std::ostringstream out;
    for (std::uint64_t x = 0; x < t.settings().total(); ++x) {
        auto xs = tuple(t.settings().decode(x));
        for (std::uint64_t a = 0; a < t.outcomes().total(); ++a) {
            auto & p = t.at(x, a);
            out << xs << '\t' << tuple(t.outcomes().decode(a)) << '\t' << p.numerator() << '\t' << p.denominator() << '\n';
        }
    }
    return out.str();
}

auto causal::correlation_json(const CorrelationTable & t) -> Json
{
    Json entries = Json::array();
    for (std::uint64_t x = 0; x < t.settings().total(); ++x)
        for (std::uint64_t a = 0; a < t.outcomes().total(); ++a)
            if (auto & p = t.at(x, a); p != Rational{0})
                entries.push_back(Json{{"x", t.settings().decode(x)}, {"a", t.outcomes().decode(a)},
                        {"num", p.numerator()}, {"den", p.denominator()}});
    return Json{{"settings", t.settings().sizes()}, {"outcomes", t.outcomes().sizes()},
        {"normalized", t.normalized()}, {"entries", entries}};
}

auto causal::decomposition_json(const CausalDecomposition & d) -> Json
{
    Json marginal = Json::array();
    for (Symbol x = 0; x < d.setting_size; ++x) {
        Json row = Json::array();
        for (Symbol a = 0; a < d.outcome_size; ++a)
            row.push_back(to_string(d.marginal_at(x, a)));
        marginal.push_back(row);
    }
    Json branches = Json::array();
    for (std::size_t b = 0; b < d.branches.size(); ++b)
        branches.push_back(Json{{"x", d.branch_keys[b].first}, {"a", d.branch_keys[b].second},
                {"then", decomposition_json(d.branches[b])}});
    return Json{{"parties", d.parties}, {"weight", rational_json(d.weight)}, {"leader", d.leader},
        {"marginal", marginal}, {"branches", branches}};
}

auto causal::game_json(const GameSpec & spec, const Rational & win, const Strategy * strategy) -> Json
{
    auto bound = causal_bound(spec);
    Json j{{"n", spec.parties()}, {"S", nodes_json(spec.players())}, {"bound", rational_json(bound)},
        {"win", rational_json(win)}, {"violated", win > bound}};
    if (strategy) {
        Json targets = Json::array();
        for (auto & r : strategy->roles)
            targets.push_back(Json{{"s", r.target}, {"predecessor", r.predecessor}, {"helpers", nodes_json(r.helpers)}});
        j["roles"] = Json{{"cycle", strategy->cycle.nodes}, {"outside_parents", nodes_json(strategy->outside_parents)},
            {"targets", targets}};
    }
    return j;
}
