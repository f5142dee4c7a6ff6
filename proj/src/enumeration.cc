#include <causal/enumeration.hh>
#include <causal/errors.hh>
#include <causal/games.hh>

#include "parallel.hh"

#include <algorithm>
#include <mutex>

using namespace causal;

namespace
{
    /// Places the low bits of `value` at the set positions of `mask`, lowest first.
    auto deposit(std::uint64_t value, std::uint64_t mask) -> std::uint64_t
    {
        std::uint64_t result = 0;
        for (; mask; mask &= mask - 1, value >>= 1)
            if (value & 1U)
                result |= mask & -mask;
        return result;
    }

    auto free_mask(int n, bool allow_self_loops) -> std::uint64_t
    {
        std::uint64_t mask = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (allow_self_loops || i != j)
                    mask |= std::uint64_t{1} << (n * n - 1 - (i * n + j));
        return mask;
    }

    auto scan_labelled(int n, const EnumerationOptions & options) -> std::vector<CanonicalForm>
    {
        std::uint64_t mask = free_mask(n, options.allow_self_loops);
        int free_bits = std::popcount(mask);
        int chunk_bits = std::min(free_bits, 12);
        std::size_t chunks = std::size_t{1} << (free_bits - chunk_bits);

        std::vector<std::vector<CanonicalForm>> found(chunks);
        detail::parallel_for(chunks, options.jobs, [&](std::size_t c) {
            std::uint64_t code = deposit(static_cast<std::uint64_t>(c) << chunk_bits, mask);
            for (std::uint64_t t = 0; t < (std::uint64_t{1} << chunk_bits); ++t) {
                CanonicalForm f{n, code};
                if (is_canonical(f))
                    found[c].push_back(f);
                code = (code - mask) & mask;
            }
        });

        std::vector<CanonicalForm> result;
        for (auto & part : found)
            result.insert(result.end(), part.begin(), part.end());
        std::sort(result.begin(), result.end());
        return result;
    }

    auto extend(int n, const EnumerationOptions & options) -> std::vector<CanonicalForm>
    {
        auto smaller = enumerate_digraphs(n - 1, options);
        int loops = options.allow_self_loops ? 2 : 1;
        std::uint64_t per_base = (std::uint64_t{1} << (2 * (n - 1))) * loops;

        std::vector<std::vector<CanonicalForm>> found(smaller.size());
        detail::parallel_for(smaller.size(), options.jobs, [&](std::size_t b) {
            DiGraph base = smaller[b].to_graph();
            for (std::uint64_t t = 0; t < per_base; ++t) {
                DiGraph g(n);
                for (auto [u, v] : base.edges())
                    g.add_edge(u, v);
                for (int k = 0; k < n - 1; ++k) {
                    if ((t >> k) & 1U)
                        g.add_edge(k, n - 1);
                    if ((t >> (n - 1 + k)) & 1U)
                        g.add_edge(n - 1, k);
                }
                if ((t >> (2 * (n - 1))) & 1U)
                    g.add_edge(n - 1, n - 1);
                found[b].push_back(canonical_form(g));
            }
            std::sort(found[b].begin(), found[b].end());
            found[b].erase(std::unique(found[b].begin(), found[b].end()), found[b].end());
        });

        std::vector<CanonicalForm> result;
        for (auto & part : found) {
            result.insert(result.end(), part.begin(), part.end());
            std::vector<CanonicalForm>().swap(part);
        }
        std::sort(result.begin(), result.end());
        result.erase(std::unique(result.begin(), result.end()), result.end());
        return result;
    }
}

auto causal::enumerate_digraphs(int n, const EnumerationOptions & options) -> std::vector<CanonicalForm>
{
    if (n < 1 || n > 7)
        throw InputError("enumeration supports 1..7 nodes, got " + std::to_string(n));
    if (n == 7 && ! options.allow_seven)
        throw BudgetExceeded("enumerating seven-node digraphs needs the explicit override");
    if (n <= 5)
        return scan_labelled(n, options);
    return extend(n, options);
}

auto causal::classify(const DiGraph & g, const ClassifyOptions & options) -> ClassificationRecord
{
    ClassificationRecord r;
    r.form = canonical_form(g);
    r.soc = is_soc(g);
    r.chordless_soc = r.soc && is_chordless_soc(g);
    r.source = find_source(g);
    if (r.soc)
        r.violation_cycle = find_violation_cycle(g);

    if (options.verify) {
        if (g.has_self_loop())
            throw InputError("verification needs a graph without self-loops: " + r.form.to_string());
        try {
            r.verdict = verify_consistency(g, VerifyOptions{options.scan, true});
        }
        catch (const BudgetExceeded &) {
            r.budget_exceeded = true;
        }
        if (r.verdict) {
            bool consistent = r.verdict->kind == ConsistencyVerdict::Kind::consistent;
            if (r.chordless_soc && ! consistent)
                throw InvariantViolation("chordless SOC graph " + r.form.to_string() + " has a counterexample");
            if (! r.soc && consistent)
                throw InvariantViolation("non-SOC graph " + r.form.to_string() + " scanned consistent");
        }
    }

    if (options.games && r.violation_cycle) {
        GameSpec spec(g.size(), r.violation_cycle->node_set());
        auto strategy = build_violation_strategy(g, *r.violation_cycle, spec);
        GameOutcome outcome{spec.players(), causal_bound(spec), std::nullopt};
        try {
            outcome.win = play(spec, SocModel(g).table(), strategy);
        }
        catch (const InputError &) {
        }
        r.game = outcome;
    }
    return r;
}

auto SurveySummary::add(const ClassificationRecord & r) -> void
{
    ++classes;
    soc += r.soc;
    chordless_soc += r.chordless_soc;
    violation += r.violation_cycle.has_value();
    if (r.verdict) {
        consistent += r.verdict->kind == ConsistencyVerdict::Kind::consistent;
        inadmissible += r.verdict->kind == ConsistencyVerdict::Kind::counterexample;
    }
    budget_exceeded += r.budget_exceeded;
    if (r.game) {
        ++games_played;
        games_violated += r.game->violated();
    }
}

auto SurveySummary::to_string(bool verified) const -> std::string
{
    std::string s = std::to_string(classes) + " classes, " + std::to_string(soc) + " soc, ";
    if (verified) {
        s += std::to_string(consistent) + " consistent, " + std::to_string(inadmissible) + " inadmissible";
        if (budget_exceeded)
            s += ", " + std::to_string(budget_exceeded) + " over budget";
    }
    else
        s += std::to_string(chordless_soc) + " chordless-soc, " + std::to_string(violation) + " violation-cycle";
    if (games_played)
        s += ", " + std::to_string(games_violated) + "/" + std::to_string(games_played) + " games violated";
    return s;
}

auto causal::survey(int n, const SurveyOptions & options) -> std::vector<ClassificationRecord>
{
    if (options.classify.verify && options.allow_self_loops)
        throw InputError("verification needs self-loop-free enumeration");

    EnumerationOptions enumeration{options.allow_self_loops, options.allow_seven, options.jobs};
    std::vector<CanonicalForm> pending;
    for (auto & f : enumerate_digraphs(n, enumeration))
        if (! options.skip.contains(f))
            pending.push_back(f);

    ClassifyOptions per_graph = options.classify;
    per_graph.scan.jobs = pending.size() < options.jobs ? options.jobs : 1;

    std::vector<ClassificationRecord> records(pending.size());
    detail::parallel_for(pending.size(), options.jobs, [&](std::size_t i) {
        records[i] = classify(pending[i].to_graph(), per_graph);
    });
    return records;
}

auto causal::summarize(const std::vector<ClassificationRecord> & records) -> SurveySummary
{
    SurveySummary s;
    for (auto & r : records)
        s.add(r);
    return s;
}
