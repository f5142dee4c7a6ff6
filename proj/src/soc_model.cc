#include <causal/soc_model.hh>
#include <causal/errors.hh>

#include "parallel.hh"

#include <algorithm>
#include <array>

using namespace causal;
using causal::detail::saturating_mul;

SocModel::SocModel(DiGraph g) :
    _graph(std::move(g)),
    _children(_graph.size())
{
    if (_graph.has_self_loop())
        throw InputError("the selection model needs a graph without self-loops");
    for (Node k = 0; k < _graph.size(); ++k)
        _children[k] = _graph.children(k).to_vector();
}

auto SocModel::selection_symbol(Node parent, Node child) const -> Symbol
{
    auto & ch = children(parent);
    auto it = std::lower_bound(ch.begin(), ch.end(), child);
    if (it == ch.end() || *it != child)
        throw InputError(std::to_string(child) + " is not a child of " + std::to_string(parent));
    return static_cast<Symbol>(it - ch.begin()) + 1;
}

auto SocModel::selected_child(Node k, Symbol s) const -> std::optional<Node>
{
    if (s == bottom)
        return std::nullopt;
    auto & ch = children(k);
    if (s > ch.size())
        throw InputError("symbol " + std::to_string(s) + " out of range for party " + std::to_string(k));
    return ch[s - 1];
}

auto SocModel::alphabet() const -> Alphabet
{
    Alphabet a;
    for (Node k = 0; k < parties(); ++k) {
        a.input_sizes.push_back(2);
        a.output_sizes.push_back(output_size(k));
    }
    return a;
}

auto SocModel::input_for(Node k, std::span<const Symbol> outputs) const -> Symbol
{
    for (auto l : _graph.parents(k))
        if (selected_child(l, outputs[l]) != k)
            return 0;
    return 1;
}

auto SocModel::table() const -> ProcessTable
{
    return ProcessTable::from_function(alphabet(), [&](std::span<const Symbol> o) {
        Assignment i(parties());
        for (Node k = 0; k < parties(); ++k)
            i[k] = input_for(k, o);
        return i;
    });
}

auto causal::build_model(const DiGraph & g) -> SocModel
{
    return SocModel(g);
}

auto causal::check_faithfulness(const SocModel & m) -> bool
{
    auto alphabet = m.alphabet();
    for (auto [l, k] : m.graph().edges()) {
        auto parents = m.graph().parents(k).to_vector();
        std::vector<std::uint32_t> sizes;
        for (auto p : parents)
            sizes.push_back(alphabet.output_sizes[p]);
        MixedRadix joint(sizes);

        bool signals = false;
        Assignment outputs(m.parties(), bottom);
        for (std::uint64_t t = 0; t < joint.total() && ! signals; ++t) {
            auto choice = joint.decode(t);
            for (std::size_t p = 0; p < parents.size(); ++p)
                outputs[parents[p]] = choice[p];
            Symbol reference = m.input_for(k, outputs);
            for (Symbol s = 0; s < alphabet.output_sizes[l]; ++s) {
                outputs[l] = s;
                if (m.input_for(k, outputs) != reference) {
                    signals = true;
                    break;
                }
            }
        }
        if (! signals)
            return false;
    }
    return true;
}

auto causal::recursive_input(const SocModel & m, const Experiment & mu, Node k, std::span<const Node> path) -> Symbol
{
    if (std::find(path.begin(), path.end(), k) != path.end())
        return 0;
    std::vector<Node> extended;
    extended.reserve(path.size() + 1);
    extended.push_back(k);
    extended.insert(extended.end(), path.begin(), path.end());
    for (auto l : m.graph().parents(k)) {
        Symbol v = recursive_input(m, mu, l, extended);
        if (m.selected_child(l, mu.tables.at(l).at(v)) != k)
            return 0;
    }
    return 1;
}

auto causal::recursive_fixed_point(const SocModel & m, const Experiment & mu) -> Assignment
{
    check_experiment(m.alphabet(), mu);
    Assignment result(m.parties());
    for (Node k = 0; k < m.parties(); ++k)
        result[k] = recursive_input(m, mu, k, {});
    return result;
}

auto causal::to_string(ConsistencyVerdict::Kind kind) -> const char *
{
    switch (kind) {
        case ConsistencyVerdict::Kind::consistent: return "consistent";
        case ConsistencyVerdict::Kind::counterexample: return "counterexample";
        case ConsistencyVerdict::Kind::skipped: return "skipped";
    }
    return "unknown";
}

namespace
{
    constexpr int max_fast_parties = 6;

    /**
     * Exhaustive verifier for the selection model on up to six parties. All
     * 2^n candidate inputs are tracked at once as bits of one word: bit c of
     * a mask refers to joint input index c, with party 0 most significant.
     * Parties are assigned local functions depth-first in index order, which
     * visits experiments in lexicographic order, and each party's
     * fixed-point constraint is applied as soon as all of its parents are
     * assigned.
     */
    class SelectionScanner
    {
    public:
        using Mask = std::uint64_t;

        explicit SelectionScanner(const SocModel & m) :
            _model(m),
            _n(m.parties()),
            _full(_n == 6 ? ~Mask{0} : (Mask{1} << (1U << _n)) - 1)
        {
            for (int k = 0; k < _n; ++k) {
                Mask x = 0;
                for (unsigned c = 0; c < (1U << _n); ++c)
                    if ((c >> (_n - 1 - k)) & 1U)
                        x |= Mask{1} << c;
                _ones[k] = x;
                _parents[k] = m.graph().parents(k);
                _out[k] = m.output_size(k);
                _choices[k] = _out[k] * _out[k];
                int last = -1;
                for (auto p : _parents[k])
                    last = std::max(last, p);
                _last_parent[k] = last;
            }
            for (int l = 0; l < _n; ++l)
                for (int k = 0; k < _n; ++k)
                    if (_last_parent[k] == l)
                        _settled_by[l].push_back(k);
            for (int k = 0; k < _n; ++k)
                if (_last_parent[k] < 0)
                    _root_mask &= _ones[k];
        }

        auto choices(int k) const -> std::uint32_t { return _choices[k]; }

        struct Failure
        {
            std::array<std::uint32_t, max_fast_parties> choice{};
            Mask fixed = 0;
            bool recursion_mismatch = false;
        };

        /// Scans all experiments whose first `prefix.size()` choices are fixed; returns the first failure.
        auto scan(std::span<const std::uint32_t> prefix, const detail::FirstFailure * first, std::size_t chunk)
                -> std::optional<Failure>
        {
            _first = first;
            _chunk = chunk;
            _steps = 0;
            _abandoned = false;
            _failure.reset();
            descend(0, _root_mask, prefix);
            return _failure;
        }

    private:
        auto assign(int l, std::uint32_t choice) -> void
        {
            _choice[l] = choice;
            std::uint32_t s0 = choice / _out[l], s1 = choice % _out[l];
            _pick[l][0] = s0 == bottom ? -1 : _model.children(l)[s0 - 1];
            _pick[l][1] = s1 == bottom ? -1 : _model.children(l)[s1 - 1];
        }

        auto selects(int l, int k) const -> Mask
        {
            return (_pick[l][0] == k ? ~_ones[l] : 0) | (_pick[l][1] == k ? _ones[l] : 0);
        }

        auto descend(int depth, Mask alive, std::span<const std::uint32_t> prefix) -> bool
        {
            if (depth == _n)
                return leaf(alive);

            std::uint32_t lo = 0, hi = _choices[depth];
            if (depth < static_cast<int>(prefix.size())) {
                lo = prefix[depth];
                hi = lo + 1;
            }
            for (std::uint32_t c = lo; c < hi; ++c) {
                assign(depth, c);
                Mask next = alive;
                for (auto k : _settled_by[depth]) {
                    Mask receives = _full;
                    for (auto p : _parents[k])
                        receives &= selects(p, k);
                    next &= ~(_ones[k] ^ receives);
                }
                next &= _full;
                if (next == 0) {
                    // every completion has no fixed point; the first one is all-zero choices
                    for (int d = depth + 1; d < _n; ++d)
                        assign(d, d < static_cast<int>(prefix.size()) ? prefix[d] : 0);
                    _failure = Failure{snapshot(), 0, false};
                    return false;
                }
                if (! descend(depth + 1, next, prefix))
                    return false;
            }
            return true;
        }

        auto leaf(Mask fixed) -> bool
        {
            if (std::popcount(fixed) != 1) {
                _failure = Failure{snapshot(), fixed, false};
                return false;
            }
            unsigned point = std::countr_zero(fixed);
            for (int k = 0; k < _n; ++k) {
                unsigned predicted = recurse(k, std::uint64_t{1} << k);
                if (predicted != ((point >> (_n - 1 - k)) & 1U)) {
                    _failure = Failure{snapshot(), fixed, true};
                    return false;
                }
            }
            if ((++_steps & 0x3fff) == 0 && _first && _first->superseded(_chunk)) {
                _abandoned = true;
                return false;
            }
            return true;
        }

        /// The path recursion with the path held as its node set; only membership is ever queried.
        auto recurse(int k, std::uint64_t on_path) const -> unsigned
        {
            for (auto l : _parents[k]) {
                unsigned v = on_path & (std::uint64_t{1} << l) ? 0 : recurse(l, on_path | (std::uint64_t{1} << l));
                if (_pick[l][v] != k)
                    return 0;
            }
            return 1;
        }

        auto snapshot() const -> std::array<std::uint32_t, max_fast_parties>
        {
            std::array<std::uint32_t, max_fast_parties> r{};
            std::copy_n(_choice.begin(), _n, r.begin());
            return r;
        }

        const SocModel & _model;
        int _n;
        Mask _full;
        Mask _root_mask = ~Mask{0};
        std::array<Mask, max_fast_parties> _ones{};
        std::array<NodeSet, max_fast_parties> _parents{};
        std::array<std::uint32_t, max_fast_parties> _out{}, _choices{}, _choice{};
        std::array<int, max_fast_parties> _last_parent{};
        std::array<std::vector<int>, max_fast_parties> _settled_by;
        std::array<std::array<int, 2>, max_fast_parties> _pick{};

        const detail::FirstFailure * _first = nullptr;
        std::size_t _chunk = 0;
        std::uint64_t _steps = 0;
        bool _abandoned = false;
        std::optional<Failure> _failure;
    };

    auto experiment_from_choices(const SocModel & m, std::span<const std::uint32_t> choice) -> Experiment
    {
        Experiment mu;
        for (int k = 0; k < m.parties(); ++k) {
            auto out = m.output_size(k);
            mu.tables.push_back({choice[k] / out, choice[k] % out});
        }
        return mu;
    }

    auto fast_verify(const SocModel & m, const ScanOptions & options, ConsistencyVerdict & verdict) -> void
    {
        int n = m.parties();
        SelectionScanner probe(m);

        // tasks fix the choices of the first one or two parties
        int fixed = std::min(n, options.jobs > 1 ? 2 : 0);
        std::vector<std::uint32_t> radix;
        std::uint64_t tasks = 1;
        for (int d = 0; d < fixed; ++d) {
            radix.push_back(probe.choices(d));
            tasks *= probe.choices(d);
        }

        std::vector<std::optional<SelectionScanner::Failure>> failures(tasks);
        detail::FirstFailure first;
        detail::parallel_for(tasks, options.jobs, [&](std::size_t t) {
            if (first.superseded(t))
                return;
            std::vector<std::uint32_t> prefix(fixed);
            std::uint64_t rest = t;
            for (int d = fixed - 1; d >= 0; --d) {
                prefix[d] = static_cast<std::uint32_t>(rest % radix[d]);
                rest /= radix[d];
            }
            SelectionScanner scanner(m);
            auto f = scanner.scan(prefix, &first, t);
            if (f) {
                failures[t] = f;
                first.record(t);
            }
        });

        for (auto & f : failures)
            if (f) {
                verdict.kind = ConsistencyVerdict::Kind::counterexample;
                verdict.mu = experiment_from_choices(m, std::span(f->choice).first(n));
                for (unsigned c = 0; c < (1U << n); ++c)
                    if ((f->fixed >> c) & 1U) {
                        Assignment a(n);
                        for (int k = 0; k < n; ++k)
                            a[k] = (c >> (n - 1 - k)) & 1U;
                        verdict.fixed_points.push_back(std::move(a));
                    }
                verdict.recursive_point = recursive_fixed_point(m, *verdict.mu);
                return;
            }
    }

    auto table_verify(const SocModel & m, std::uint64_t experiments, ConsistencyVerdict & verdict) -> void
    {
        auto w = m.table();
        auto alphabet = m.alphabet();
        for (std::uint64_t e = 0; e < experiments; ++e) {
            auto mu = experiment_at(alphabet, e);
            auto points = fixed_points(w, mu);
            auto predicted = recursive_fixed_point(m, mu);
            if (points.size() != 1 || points.front() != predicted) {
                verdict.kind = ConsistencyVerdict::Kind::counterexample;
                verdict.mu = std::move(mu);
                verdict.fixed_points = std::move(points);
                verdict.recursive_point = std::move(predicted);
                return;
            }
        }
    }
}

auto causal::verify_consistency(const DiGraph & g, const VerifyOptions & options) -> ConsistencyVerdict
{
    SocModel m(g);
    ConsistencyVerdict verdict;
    if (! options.force && ! is_soc(g)) {
        verdict.kind = ConsistencyVerdict::Kind::skipped;
        return verdict;
    }

    std::uint64_t experiments = experiment_count(m.alphabet());
    std::uint64_t candidates = g.size() >= 64 ? static_cast<std::uint64_t>(-1) : std::uint64_t{1} << g.size();
    std::uint64_t steps = saturating_mul(experiments, candidates);
    if (! options.scan.unlimited && steps > options.scan.budget)
        throw BudgetExceeded("verification needs " + std::to_string(experiments) + " experiments x "
                + std::to_string(candidates) + " candidate inputs, over the budget of " + std::to_string(options.scan.budget) + " steps");
    verdict.experiments = experiments;

    if (g.size() <= max_fast_parties)
        fast_verify(m, options.scan, verdict);
    else
        table_verify(m, experiments, verdict);
    return verdict;
}
