#include <causal/errors.hh>
#include <causal/games.hh>
#include <causal/soc_model.hh>

#include <algorithm>

using namespace causal;

GameSpec::GameSpec(int n, NodeSet players) :
    _n(n),
    _players(players)
{
    if (n < 1 || n > max_nodes)
        throw InputError("game needs between 1 and " + std::to_string(max_nodes) + " parties");
    if (players.empty())
        throw InputError("the player set S must be nonempty");
    if (! players.is_subset_of(NodeSet::range(n)))
        throw InputError("player set names parties outside 0.." + std::to_string(n - 1));
}

auto GameSpec::encode_setting(std::optional<int> party, std::optional<int> bit) const -> Symbol
{
    if (party && (*party < 0 || *party >= _n))
        throw InputError("setting names party " + std::to_string(*party) + " out of range");
    if (bit && (*bit < 0 || *bit > 1))
        throw InputError("setting bit must be 0 or 1");
    return static_cast<Symbol>(party.value_or(_n) * 3 + bit.value_or(2));
}

auto GameSpec::decode_setting(Symbol x) const -> std::pair<std::optional<int>, std::optional<int>>
{
    if (x >= setting_size())
        throw InputError("setting symbol " + std::to_string(x) + " out of range");
    int u = static_cast<int>(x / 3), v = static_cast<int>(x % 3);
    return {u == _n ? std::nullopt : std::optional<int>{u}, v == 2 ? std::nullopt : std::optional<int>{v}};
}

auto GameSpec::settings_for(int s, int b) const -> Assignment
{
    if (! _players.contains(s))
        throw InputError("party " + std::to_string(s) + " is not a player");
    Assignment x(_n);
    for (int k = 0; k < _n; ++k) {
        if (k == s)
            x[k] = encode_setting(s, std::nullopt);
        else if (_players.contains(k))
            x[k] = encode_setting(s, b);
        else
            x[k] = encode_setting(std::nullopt, std::nullopt);
    }
    return x;
}

auto causal::causal_bound(const GameSpec & spec) -> Rational
{
    return Rational{1} - Rational(1, spec.referee_draws());
}

auto causal::build_violation_strategy(const DiGraph & g, const Cycle & c, const GameSpec & spec) -> Strategy
{
    if (g.has_self_loop())
        throw InputError("strategy construction needs a graph without self-loops");
    if (spec.parties() != g.size())
        throw InputError("game and graph disagree on the party count");
    if (! is_cycle_of(g, c))
        throw InputError(c.to_string() + " is not a directed cycle of the graph");
    NodeSet on_cycle = c.node_set();
    NodeSet copa = common_parents(g, on_cycle);
    if (copa.empty())
        throw InputError("cycle " + c.to_string() + " has no common parents");
    if (! copa.is_subset_of(on_cycle))
        throw InputError("cycle " + c.to_string() + " has common parents off the cycle");
    if (spec.players() != on_cycle)
        throw InputError("the player set must be the cycle's nodes");

    SocModel model(g);
    Strategy strategy;
    strategy.cycle = c;

    NodeSet cycle_parents;
    for (auto v : on_cycle)
        cycle_parents |= g.parents(v);
    strategy.outside_parents = cycle_parents - on_cycle;

    std::vector<Node> outside_target(g.size(), -1);
    for (auto d : strategy.outside_parents) {
        NodeSet targets = g.children(d) & on_cycle;
        if (targets.size() != 1)
            throw InvariantViolation("party " + std::to_string(d) + " outside the cycle has several children on it");
        outside_target[d] = targets.first();
    }

    int len = c.size();
    std::vector<Node> successor(g.size(), -1), predecessor(g.size(), -1);
    for (int i = 0; i < len; ++i) {
        successor[c.nodes[i]] = c.nodes[(i + 1) % len];
        predecessor[c.nodes[(i + 1) % len]] = c.nodes[i];
    }
    for (auto s : c.nodes)
        strategy.roles.push_back(StrategyRoles{s, predecessor[s], (g.parents(s) & on_cycle) - NodeSet{predecessor[s]}});
    std::sort(strategy.roles.begin(), strategy.roles.end(), [](auto & a, auto & b) { return a.target < b.target; });

    std::vector<std::uint32_t> inputs(g.size(), 2), settings(g.size(), spec.setting_size()), outcomes(g.size(), 2);
    strategy.instrument = Instrument::blank(inputs, settings, outcomes);
    auto select = [&](Node k, Node child) { return model.selection_symbol(k, child); };

    for (Node k = 0; k < g.size(); ++k)
        for (Symbol x = 0; x < spec.setting_size(); ++x) {
            auto [named, bit] = spec.decode_setting(x);
            for (Symbol i = 0; i < 2; ++i) {
                Symbol o = bottom;
                if (outside_target[k] >= 0)
                    o = select(k, outside_target[k]);
                else if (on_cycle.contains(k) && named && on_cycle.contains(*named) && k != *named) {
                    Node s = *named;
                    if (k == predecessor[s])
                        o = bit == 1 ? select(k, s) : bottom;
                    else if (g.has_edge(k, s))
                        o = select(k, s);
                    else
                        o = i == 1 ? select(k, successor[k]) : bottom;
                }
                strategy.instrument.entry(k, x, i) = {o, i};
            }
        }
    return strategy;
}

auto causal::play(const GameSpec & spec, const ProcessTable & w, const Instrument & inst) -> Rational
{
    if (spec.parties() != w.parties())
        throw InputError("game and process disagree on the party count");
    for (int k = 0; k < inst.parties(); ++k)
        if (inst.setting_sizes[k] != spec.setting_size())
            throw InputError("instrument of party " + std::to_string(k) + " does not use the game's settings");

    MixedRadix outcomes(inst.outcome_sizes);
    int wins = 0;
    for (auto s : spec.players())
        for (int b = 0; b < 2; ++b) {
            auto counts = evaluate_column(w, inst, spec.settings_for(s, b));
            std::uint64_t total = 0, hit = 0;
            for (std::uint64_t a = 0; a < counts.size(); ++a)
                if (counts[a]) {
                    total += counts[a];
                    hit = a;
                }
            if (total != 1)
                throw InputError("referee draw (s=" + std::to_string(s) + ", b=" + std::to_string(b) + ") has "
                        + std::to_string(total) + " fixed points; not a valid process");
            if (outcomes.digit(hit, s) == static_cast<Symbol>(b))
                ++wins;
        }
    return Rational(wins, spec.referee_draws());
}

auto causal::play(const GameSpec & spec, const ProcessTable & w, const Strategy & strategy) -> Rational
{
    return play(spec, w, strategy.instrument);
}

auto causal::random_instrument(const GameSpec & spec, const Alphabet & alphabet, std::mt19937_64 & rng) -> Instrument
{
    int n = alphabet.parties();
    if (n != spec.parties())
        throw InputError("game and process disagree on the party count");
    auto inst = Instrument::blank(alphabet.input_sizes, std::vector<std::uint32_t>(n, spec.setting_size()),
            std::vector<std::uint32_t>(n, 2));
    for (int k = 0; k < n; ++k)
        for (auto & [o, a] : inst.tables[k]) {
            o = static_cast<Symbol>(rng() % alphabet.output_sizes[k]);
            a = static_cast<Symbol>(rng() % 2);
        }
    return inst;
}

auto causal::random_strategy_search(const GameSpec & spec, const ProcessTable & w, std::uint64_t samples,
        std::uint64_t seed) -> StrategySearch
{
    std::mt19937_64 rng(seed);
    StrategySearch result;
    for (; result.samples < samples; ++result.samples) {
        auto value = play(spec, w, random_instrument(spec, w.alphabet(), rng));
        result.best = std::max(result.best, value);
    }
    return result;
}
