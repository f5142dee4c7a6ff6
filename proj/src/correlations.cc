#include <causal/correlations.hh>
#include <causal/errors.hh>

#include "parallel.hh"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

using namespace causal;
using causal::detail::saturating_mul;

auto Instrument::blank(std::vector<std::uint32_t> inputs, std::vector<std::uint32_t> settings,
        std::vector<std::uint32_t> outcomes) -> Instrument
{
    if (inputs.size() != settings.size() || inputs.size() != outcomes.size())
        throw InputError("instrument shape lists disagree on the party count");
    Instrument inst{std::move(inputs), std::move(settings), std::move(outcomes), {}};
    for (std::size_t k = 0; k < inst.input_sizes.size(); ++k)
        inst.tables.emplace_back(std::size_t{inst.input_sizes[k]} * inst.setting_sizes[k], std::pair<Symbol, Symbol>{0, 0});
    return inst;
}

auto Instrument::experiment_at(std::span<const Symbol> settings) const -> Experiment
{
    Experiment mu;
    mu.tables.resize(parties());
    for (int k = 0; k < parties(); ++k)
        for (Symbol i = 0; i < input_sizes[k]; ++i)
            mu.tables[k].push_back(entry(k, settings[k], i).first);
    return mu;
}

auto Instrument::without(int k) const -> Instrument
{
    Instrument r = *this;
    r.input_sizes.erase(r.input_sizes.begin() + k);
    r.setting_sizes.erase(r.setting_sizes.begin() + k);
    r.outcome_sizes.erase(r.outcome_sizes.begin() + k);
    r.tables.erase(r.tables.begin() + k);
    return r;
}

auto causal::check_instrument(const Alphabet & alphabet, const Instrument & inst) -> void
{
    int n = alphabet.parties();
    if (inst.parties() != n || static_cast<int>(inst.input_sizes.size()) != n
            || static_cast<int>(inst.setting_sizes.size()) != n || static_cast<int>(inst.outcome_sizes.size()) != n)
        throw InputError("instrument covers " + std::to_string(inst.parties()) + " parties, process has " + std::to_string(n));
    for (int k = 0; k < n; ++k) {
        if (inst.input_sizes[k] != alphabet.input_sizes[k])
            throw InputError("instrument of party " + std::to_string(k) + " reads the wrong number of inputs");
        if (inst.setting_sizes[k] < 1 || inst.outcome_sizes[k] < 1)
            throw InputError("setting and outcome alphabets must be nonempty");
        if (inst.tables[k].size() != std::size_t{inst.input_sizes[k]} * inst.setting_sizes[k])
            throw InputError("instrument table of party " + std::to_string(k) + " has the wrong size");
        for (auto [o, a] : inst.tables[k])
            if (o >= alphabet.output_sizes[k] || a >= inst.outcome_sizes[k])
                throw InputError("instrument of party " + std::to_string(k) + " emits an out-of-range symbol");
    }
}

auto causal::parse_instrument(std::istream & in) -> Instrument
{
    std::string line;
    int line_no = 0;
    auto next = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            auto p = line.find_first_not_of(" \t\r");
            if (p != std::string::npos && line[p] != '#')
                return true;
        }
        return false;
    };
    auto fail = [&](const std::string & why) {
        return InputError("line " + std::to_string(line_no) + ": " + why);
    };

    if (! next())
        throw InputError("instrument input is empty");
    int n;
    {
        std::istringstream tokens(line);
        if (! (tokens >> n) || n < 1 || n > 64)
            throw fail("expected the party count");
    }

    std::vector<std::uint32_t> settings, outcomes;
    for (int k = 0; k < n; ++k) {
        if (! next())
            throw fail("missing '|X_k| |A_k|' line");
        std::istringstream tokens(line);
        long long x, a;
        if (! (tokens >> x >> a) || x < 1 || a < 1 || x > 1 << 20 || a > 1 << 20)
            throw fail("expected '|X_k| |A_k|'");
        settings.push_back(static_cast<std::uint32_t>(x));
        outcomes.push_back(static_cast<std::uint32_t>(a));
    }

    Instrument inst;
    inst.setting_sizes = settings;
    inst.outcome_sizes = outcomes;
    for (int k = 0; k < n; ++k) {
        std::vector<std::pair<Symbol, Symbol>> table;
        std::size_t width = 0;
        for (std::uint32_t x = 0; x < settings[k]; ++x) {
            if (! next())
                throw fail("missing setting line for party " + std::to_string(k));
            std::istringstream tokens(line);
            std::string token;
            std::size_t count = 0;
            while (tokens >> token) {
                auto slash = token.find('/');
                if (slash == std::string::npos)
                    throw fail("expected entries of the form o/a");
                try {
                    std::size_t used_o, used_a;
                    auto o = std::stoul(token.substr(0, slash), &used_o);
                    auto a = std::stoul(token.substr(slash + 1), &used_a);
                    if (used_o != slash || used_a != token.size() - slash - 1)
                        throw fail("malformed entry " + token);
                    table.emplace_back(static_cast<Symbol>(o), static_cast<Symbol>(a));
                }
                catch (const std::logic_error &) {
                    throw fail("malformed entry " + token);
                }
                ++count;
            }
            if (count == 0 || (width && count != width))
                throw fail("every setting line of a party needs the same number of entries");
            width = count;
        }
        inst.input_sizes.push_back(static_cast<std::uint32_t>(width));
        inst.tables.push_back(std::move(table));
    }
    if (next())
        throw fail("trailing content after the instrument");
    return inst;
}

auto causal::read_instrument_file(const std::string & path) -> Instrument
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open " + path);
    try {
        return parse_instrument(in);
    }
    catch (const InputError & e) {
        throw InputError(path + ": " + e.what());
    }
}

auto causal::format_instrument(const Instrument & inst) -> std::string
{
    std::ostringstream out;
    out << inst.parties() << '\n';
    for (int k = 0; k < inst.parties(); ++k)
        out << inst.setting_sizes[k] << ' ' << inst.outcome_sizes[k] << '\n';
    for (int k = 0; k < inst.parties(); ++k)
        for (Symbol x = 0; x < inst.setting_sizes[k]; ++x) {
            for (Symbol i = 0; i < inst.input_sizes[k]; ++i) {
                auto [o, a] = inst.entry(k, x, i);
                out << (i ? " " : "") << o << '/' << a;
            }
            out << '\n';
        }
    return out.str();
}

CorrelationTable::CorrelationTable(MixedRadix settings, MixedRadix outcomes) :
    _settings(std::move(settings)),
    _outcomes(std::move(outcomes))
{
    auto size = saturating_mul(_settings.total(), _outcomes.total());
    if (size > max_table_entries)
        throw BudgetExceeded("correlation table with " + std::to_string(size) + " entries is too large to materialise");
    _entries.assign(size, Rational{0});
}

auto CorrelationTable::column_sum(std::uint64_t x) const -> Rational
{
    Rational sum{0};
    for (std::uint64_t a = 0; a < _outcomes.total(); ++a)
        sum += at(x, a);
    return sum;
}

auto CorrelationTable::normalized() const -> bool
{
    for (std::uint64_t x = 0; x < _settings.total(); ++x)
        if (column_sum(x) != Rational{1})
            return false;
    return true;
}

auto causal::evaluate_column(const ProcessTable & w, const Instrument & inst, std::span<const Symbol> settings)
        -> std::vector<std::uint64_t>
{
    check_instrument(w.alphabet(), inst);
    int n = w.parties();
    if (static_cast<int>(settings.size()) != n)
        throw InputError("joint setting has the wrong number of parties");
    for (int k = 0; k < n; ++k)
        if (settings[k] >= inst.setting_sizes[k])
            throw InputError("setting out of range for party " + std::to_string(k));

    MixedRadix outcomes(inst.outcome_sizes);
    std::vector<std::uint64_t> counts(outcomes.total(), 0);
    Assignment o(n), a(n);
    for (std::uint64_t i = 0; i < w.inputs().total(); ++i) {
        auto inputs = w.inputs().decode(i);
        for (int k = 0; k < n; ++k)
            std::tie(o[k], a[k]) = inst.entry(k, settings[k], inputs[k]);
        // the sum over o collapses: only o = mu(x, i) contributes
        if (w.row(w.outputs().encode(o)) == i)
            ++counts[outcomes.encode(a)];
    }
    return counts;
}

auto causal::evaluate(const ProcessTable & w, const Instrument & inst) -> CorrelationTable
{
    check_instrument(w.alphabet(), inst);
    CorrelationTable table{MixedRadix(inst.setting_sizes), MixedRadix(inst.outcome_sizes)};
    for (std::uint64_t x = 0; x < table.settings().total(); ++x) {
        auto counts = evaluate_column(w, inst, table.settings().decode(x));
        for (std::uint64_t a = 0; a < counts.size(); ++a)
            table.at(x, a) = Rational(static_cast<std::int64_t>(counts[a]));
    }
    return table;
}

auto causal::signalling_graph(const ProcessTable & w) -> DiGraph
{
    int n = w.parties();
    DiGraph g(n);
    const auto & outs = w.outputs();
    for (std::uint64_t o = 0; o < outs.total(); ++o)
        for (int j = 0; j < n; ++j) {
            if (outs.digit(o, j) != 0)
                continue;
            for (Symbol v = 1; v < outs.size(j); ++v) {
                auto other = o + v * outs.stride(j);
                for (int k = 0; k < n; ++k)
                    if (k != j && w.component(k, o) != w.component(k, other))
                        g.add_edge(j, k);
            }
        }
    return g;
}

namespace
{
    auto peel(const ProcessTable & w, const DiGraph & g, const Instrument & inst, std::vector<int> ids)
            -> CausalDecomposition
    {
        if (! is_chordless_soc(g))
            throw InvariantViolation("peeled causal structure is no longer chordless siblings-on-cycles");
        auto source = find_source(g);
        if (! source)
            throw InputError("causal structure has no source node");
        int k = *source;

        Symbol constant = w.component(k, 0);
        for (std::uint64_t o = 1; o < w.outputs().total(); ++o)
            if (w.component(k, o) != constant)
                throw InvariantViolation("input of source party " + std::to_string(ids[k]) + " is not constant");

        CausalDecomposition d;
        d.parties = ids;
        d.leader = ids[k];
        d.setting_size = inst.setting_sizes[k];
        d.outcome_size = inst.outcome_sizes[k];
        d.marginal.assign(std::size_t{d.setting_size} * d.outcome_size, Rational{0});

        for (Symbol x = 0; x < d.setting_size; ++x) {
            auto outcome = inst.entry(k, x, constant).second;
            d.marginal[x * d.outcome_size + outcome] = Rational{1};
            if (w.parties() == 1)
                continue;

            std::vector<Symbol> local(inst.input_sizes[k]);
            for (Symbol i = 0; i < local.size(); ++i)
                local[i] = inst.entry(k, x, i).first;
            auto reduced = reduce(w, k, local);

            auto allowed = g.induced(g.nodes() - NodeSet{k});
            auto next = signalling_graph(reduced);
            for (auto [u, v] : next.edges())
                if (! allowed.has_edge(u, v))
                    throw InvariantViolation("reduced process signals along an edge the causal structure lacks");

            std::vector<int> rest = ids;
            rest.erase(rest.begin() + k);
            d.branch_keys.emplace_back(x, outcome);
            d.branches.push_back(peel(reduced, next, inst.without(k), std::move(rest)));
        }
        return d;
    }

    auto probability(const CausalDecomposition & d, std::span<const Symbol> x, std::span<const Symbol> a) -> Rational
    {
        auto k = static_cast<std::size_t>(d.leader);
        Rational p = d.weight * d.marginal_at(x[k], a[k]);
        if (p == Rational{0} || d.branches.empty())
            return p;
        for (std::size_t b = 0; b < d.branches.size(); ++b)
            if (d.branch_keys[b] == std::pair{x[k], a[k]})
                return p * probability(d.branches[b], x, a);
        throw InvariantViolation("decomposition lacks the branch for a supported leader outcome");
    }
}

auto causal::peel_decompose(const ProcessTable & w, const DiGraph & g, const Instrument & inst,
        const ScanOptions & options) -> CausalDecomposition
{
    check_instrument(w.alphabet(), inst);
    if (g.size() != w.parties())
        throw InputError("graph and process disagree on the party count");
    if (! is_chordless_soc(g))
        throw InputError("peeling needs a chordless siblings-on-cycles causal structure");
    auto verdict = is_process(w, options);
    if (! verdict.valid)
        throw InputError("not a valid process: experiment " + verdict.counterexample->to_string() + " has "
                + std::to_string(verdict.fixed_point_count) + " fixed points");

    std::vector<int> ids(g.size());
    std::iota(ids.begin(), ids.end(), 0);
    return peel(w, g, inst, std::move(ids));
}

auto causal::reconstruct(const CausalDecomposition & d, const Instrument & inst) -> CorrelationTable
{
    CorrelationTable table{MixedRadix(inst.setting_sizes), MixedRadix(inst.outcome_sizes)};
    for (std::uint64_t x = 0; x < table.settings().total(); ++x) {
        auto xs = table.settings().decode(x);
        for (std::uint64_t a = 0; a < table.outcomes().total(); ++a)
            table.at(x, a) = probability(d, xs, table.outcomes().decode(a));
    }
    return table;
}

namespace
{
    struct GameSearch
    {
        int n;
        std::vector<int> s_of, b_of;
        std::vector<Assignment> settings;
        std::vector<int> order;
        int best = 0;

        auto run(int depth, const std::vector<int> & history, std::vector<char> won) -> void
        {
            int events = static_cast<int>(s_of.size());
            if (depth == n) {
                best = std::max(best, static_cast<int>(std::count(won.begin(), won.end(), 1)));
                return;
            }
            int p = order[depth];

            // what party p can tell apart: earlier history plus its own setting
            std::map<std::pair<int, Symbol>, int> ids;
            std::vector<int> cls(events);
            for (int e = 0; e < events; ++e)
                cls[e] = ids.try_emplace({history[e], settings[e][p]}, static_cast<int>(ids.size())).first->second;
            int classes = static_cast<int>(ids.size());

            for (std::uint32_t guess = 0; guess < (1U << classes); ++guess) {
                std::vector<int> next(events);
                std::vector<char> w = won;
                for (int e = 0; e < events; ++e) {
                    int a = (guess >> cls[e]) & 1U;
                    if (s_of[e] == p)
                        w[e] = a == b_of[e];
                    next[e] = 2 * cls[e] + a;
                }
                run(depth + 1, next, std::move(w));
                if (best == events)
                    return;
            }
        }
    };
}

auto causal::max_causal_game_value(const GameSpec & spec, const ScanOptions & options) -> Rational
{
    int n = spec.parties();
    int events = spec.referee_draws();
    std::uint64_t steps = 1;
    for (int k = 2; k <= n; ++k)
        steps = saturating_mul(steps, k);
    for (int k = 0; k < n; ++k)
        steps = saturating_mul(steps, events >= 64 ? static_cast<std::uint64_t>(-1) : std::uint64_t{1} << events);
    if (! options.unlimited && steps > options.budget)
        throw BudgetExceeded("fixed-order strategy scan needs about " + std::to_string(steps) + " steps");

    GameSearch search{n, {}, {}, {}, {}, 0};
    for (auto s : spec.players())
        for (int b = 0; b < 2; ++b) {
            search.s_of.push_back(s);
            search.b_of.push_back(b);
            search.settings.push_back(spec.settings_for(s, b));
        }

    search.order.resize(n);
    std::iota(search.order.begin(), search.order.end(), 0);
    do {
        search.run(0, std::vector<int>(events, 0), std::vector<char>(events, 0));
    } while (search.best < events && std::next_permutation(search.order.begin(), search.order.end()));

    return Rational(search.best, events);
}
