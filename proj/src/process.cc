#include <causal/process.hh>
#include <causal/errors.hh>

#include "parallel.hh"

#include <algorithm>
#include <atomic>

using namespace causal;
using causal::detail::saturating_mul;

MixedRadix::MixedRadix(std::vector<std::uint32_t> sizes) :
    _sizes(std::move(sizes)),
    _strides(_sizes.size())
{
    std::uint64_t stride = 1;
    for (int k = digits() - 1; k >= 0; --k) {
        if (_sizes[k] == 0)
            throw InputError("alphabet sizes must be at least 1");
        _strides[k] = stride;
        stride = saturating_mul(stride, _sizes[k]);
        if (stride == static_cast<std::uint64_t>(-1))
            throw InputError("joint alphabet too large to index");
    }
    _total = stride;
}

auto MixedRadix::encode(std::span<const Symbol> digits) const -> std::uint64_t
{
    if (static_cast<int>(digits.size()) != this->digits())
        throw InputError("assignment has " + std::to_string(digits.size()) + " entries, expected " + std::to_string(this->digits()));
    std::uint64_t index = 0;
    for (int k = 0; k < this->digits(); ++k) {
        if (digits[k] >= _sizes[k])
            throw InputError("symbol " + std::to_string(digits[k]) + " out of range for party " + std::to_string(k));
        index += digits[k] * _strides[k];
    }
    return index;
}

auto MixedRadix::decode(std::uint64_t index) const -> Assignment
{
    Assignment result(digits());
    for (int k = 0; k < digits(); ++k)
        result[k] = digit(index, k);
    return result;
}

auto Alphabet::validate() const -> void
{
    if (input_sizes.empty())
        throw InputError("alphabet needs at least one party");
    if (input_sizes.size() != output_sizes.size())
        throw InputError("input and output alphabets list different party counts");
    for (auto s : input_sizes)
        if (s < 1)
            throw InputError("input alphabet sizes must be at least 1");
    for (auto s : output_sizes)
        if (s < 1)
            throw InputError("output alphabet sizes must be at least 1");
}

auto Experiment::operator()(std::span<const Symbol> inputs) const -> Assignment
{
    Assignment out(tables.size());
    for (std::size_t k = 0; k < tables.size(); ++k)
        out[k] = tables[k].at(inputs[k]);
    return out;
}

auto Experiment::to_string() const -> std::string
{
    std::string out;
    for (std::size_t k = 0; k < tables.size(); ++k) {
        if (k)
            out += " | ";
        for (std::size_t i = 0; i < tables[k].size(); ++i)
            out += (i ? " " : "") + std::to_string(tables[k][i]);
    }
    return out;
}

auto causal::check_experiment(const Alphabet & alphabet, const Experiment & mu) -> void
{
    if (mu.parties() != alphabet.parties())
        throw InputError("experiment has " + std::to_string(mu.parties()) + " parties, expected " + std::to_string(alphabet.parties()));
    for (int k = 0; k < mu.parties(); ++k) {
        if (mu.tables[k].size() != alphabet.input_sizes[k])
            throw InputError("experiment table of party " + std::to_string(k) + " has the wrong length");
        for (auto o : mu.tables[k])
            if (o >= alphabet.output_sizes[k])
                throw InputError("experiment of party " + std::to_string(k) + " emits out-of-range symbol " + std::to_string(o));
    }
}

ProcessTable::ProcessTable(Alphabet alphabet, std::vector<std::uint64_t> rows) :
    _alphabet(std::move(alphabet))
{
    _alphabet.validate();
    _inputs = MixedRadix(_alphabet.input_sizes);
    _outputs = MixedRadix(_alphabet.output_sizes);
    if (rows.size() != _outputs.total())
        throw InputError("process table has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(_outputs.total()));
    for (auto r : rows)
        if (r >= _inputs.total())
            throw InputError("process table row points outside the joint input space");
    _rows = std::move(rows);
}

auto ProcessTable::from_function(Alphabet alphabet,
        const std::function<Assignment (std::span<const Symbol>)> & omega) -> ProcessTable
{
    alphabet.validate();
    MixedRadix in(alphabet.input_sizes), out(alphabet.output_sizes);
    std::vector<std::uint64_t> rows(out.total());
    for (std::uint64_t o = 0; o < out.total(); ++o)
        rows[o] = in.encode(omega(out.decode(o)));
    return ProcessTable(std::move(alphabet), std::move(rows));
}

auto ProcessTable::apply(std::span<const Symbol> outputs) const -> Assignment
{
    return _inputs.decode(_rows[_outputs.encode(outputs)]);
}

auto causal::experiment_count(const Alphabet & alphabet) -> std::uint64_t
{
    std::uint64_t count = 1;
    for (int k = 0; k < alphabet.parties(); ++k)
        for (std::uint32_t i = 0; i < alphabet.input_sizes[k]; ++i)
            count = saturating_mul(count, alphabet.output_sizes[k]);
    return count;
}

auto causal::experiment_at(const Alphabet & alphabet, std::uint64_t index) -> Experiment
{
    Experiment mu;
    mu.tables.resize(alphabet.parties());
    for (int k = 0; k < alphabet.parties(); ++k)
        mu.tables[k].resize(alphabet.input_sizes[k]);
    // last table entry is the least significant digit
    for (int k = alphabet.parties() - 1; k >= 0; --k)
        for (int i = static_cast<int>(alphabet.input_sizes[k]) - 1; i >= 0; --i) {
            mu.tables[k][i] = static_cast<Symbol>(index % alphabet.output_sizes[k]);
            index /= alphabet.output_sizes[k];
        }
    return mu;
}

auto causal::is_nonsignaling(const ProcessTable & w) -> bool
{
    auto & out = w.outputs();
    for (std::uint64_t o = 0; o < out.total(); ++o)
        for (int k = 0; k < w.parties(); ++k) {
            std::uint64_t base = o - out.digit(o, k) * out.stride(k);
            if (w.component(k, o) != w.component(k, base))
                return false;
        }
    return true;
}

namespace
{
    /// Counts fixed points of omega . mu by sweeping the joint input space.
    class FixedPointCounter
    {
    public:
        explicit FixedPointCounter(const ProcessTable & w) :
            _w(w),
            _contribution(w.parties()),
            _digits(w.parties())
        {
            for (int k = 0; k < w.parties(); ++k)
                _contribution[k].resize(w.alphabet().input_sizes[k]);
        }

        auto load(const Experiment & mu) -> void
        {
            for (int k = 0; k < _w.parties(); ++k)
                for (std::size_t i = 0; i < mu.tables[k].size(); ++i)
                    _contribution[k][i] = mu.tables[k][i] * _w.outputs().stride(k);
        }

        /// Visits each fixed point's joint input index; stops early when `visit` returns false.
        template <typename Visit_>
        auto sweep(Visit_ && visit) -> void
        {
            int n = _w.parties();
            auto & in = _w.inputs();
            std::fill(_digits.begin(), _digits.end(), 0);
            std::uint64_t o = 0;
            for (int k = 0; k < n; ++k)
                o += _contribution[k][0];

            for (std::uint64_t i = 0; i < in.total(); ++i) {
                if (_w.row(o) == i && ! visit(i))
                    return;
                for (int k = n - 1; k >= 0; --k) {
                    auto old = _digits[k];
                    if (++_digits[k] < in.size(k)) {
                        o += _contribution[k][_digits[k]] - _contribution[k][old];
                        break;
                    }
                    _digits[k] = 0;
                    o -= _contribution[k][old] - _contribution[k][0];
                }
            }
        }

        auto count(std::uint64_t stop_after = static_cast<std::uint64_t>(-1)) -> std::uint64_t
        {
            std::uint64_t c = 0;
            sweep([&](std::uint64_t) { return ++c < stop_after; });
            return c;
        }

    private:
        const ProcessTable & _w;
        std::vector<std::vector<std::uint64_t>> _contribution;
        std::vector<std::uint32_t> _digits;
    };

    /// Steps through experiments in lexicographic order from a given index.
    class ExperimentOdometer
    {
    public:
        ExperimentOdometer(const Alphabet & alphabet, std::uint64_t start) :
            _alphabet(alphabet),
            _mu(experiment_at(alphabet, start))
        {
        }

        auto current() const -> const Experiment & { return _mu; }

        auto advance() -> void
        {
            for (int k = _alphabet.parties() - 1; k >= 0; --k)
                for (int i = static_cast<int>(_alphabet.input_sizes[k]) - 1; i >= 0; --i) {
                    if (++_mu.tables[k][i] < _alphabet.output_sizes[k])
                        return;
                    _mu.tables[k][i] = 0;
                }
        }

    private:
        const Alphabet & _alphabet;
        Experiment _mu;
    };

    auto check_budget(const ProcessTable & w, const ScanOptions & options) -> std::uint64_t
    {
        std::uint64_t experiments = experiment_count(w.alphabet());
        std::uint64_t steps = saturating_mul(experiments, w.inputs().total());
        if (! options.unlimited && steps > options.budget)
            throw BudgetExceeded("exhaustive scan needs " + std::to_string(experiments) + " experiments x "
                    + std::to_string(w.inputs().total()) + " inputs, over the budget of " + std::to_string(options.budget) + " steps");
        return experiments;
    }

    struct Chunking
    {
        std::uint64_t total, chunks;

        auto begin(std::uint64_t c) const -> std::uint64_t { return total / chunks * c + std::min(c, total % chunks); }
        auto end(std::uint64_t c) const -> std::uint64_t { return begin(c + 1); }
    };

    auto chunking_for(std::uint64_t total, unsigned jobs) -> Chunking
    {
        std::uint64_t chunks = jobs <= 1 ? 1 : std::min<std::uint64_t>(total, std::uint64_t{jobs} * 16);
        return Chunking{total, std::max<std::uint64_t>(chunks, 1)};
    }
}

auto causal::fixed_points(const ProcessTable & w, const Experiment & mu) -> std::vector<Assignment>
{
    check_experiment(w.alphabet(), mu);
    FixedPointCounter counter(w);
    counter.load(mu);
    std::vector<Assignment> result;
    counter.sweep([&](std::uint64_t i) {
        result.push_back(w.inputs().decode(i));
        return true;
    });
    return result;
}

auto causal::count_fixed_points(const ProcessTable & w, const Experiment & mu) -> std::uint64_t
{
    check_experiment(w.alphabet(), mu);
    FixedPointCounter counter(w);
    counter.load(mu);
    return counter.count();
}

auto causal::is_process(const ProcessTable & w, const ScanOptions & options) -> ProcessVerdict
{
    std::uint64_t experiments = check_budget(w, options);
    auto chunking = chunking_for(experiments, options.jobs);

    struct Failure
    {
        std::optional<Experiment> mu;
        std::uint64_t count = 0;
    };
    std::vector<Failure> failures(chunking.chunks);
    detail::FirstFailure first;

    detail::parallel_for(chunking.chunks, options.jobs, [&](std::size_t c) {
        if (first.superseded(c))
            return;
        FixedPointCounter counter(w);
        ExperimentOdometer odo(w.alphabet(), chunking.begin(c));
        for (std::uint64_t e = chunking.begin(c); e < chunking.end(c); ++e, odo.advance()) {
            counter.load(odo.current());
            auto count = counter.count(2);
            if (count != 1) {
                failures[c] = Failure{odo.current(), count};
                first.record(c);
                return;
            }
            if ((e & 0xfff) == 0 && first.superseded(c))
                return;
        }
    });

    ProcessVerdict verdict;
    for (auto & f : failures)
        if (f.mu) {
            verdict.valid = false;
            verdict.counterexample = f.mu;
            verdict.fixed_point_count = count_fixed_points(w, *f.mu);
            break;
        }
    return verdict;
}

auto causal::antinomy_report(const ProcessTable & w, const ScanOptions & options) -> AntinomyReport
{
    std::uint64_t experiments = check_budget(w, options);
    auto chunking = chunking_for(experiments, options.jobs);
    std::atomic<bool> none{false}, many{false};

    detail::parallel_for(chunking.chunks, options.jobs, [&](std::size_t c) {
        FixedPointCounter counter(w);
        ExperimentOdometer odo(w.alphabet(), chunking.begin(c));
        for (std::uint64_t e = chunking.begin(c); e < chunking.end(c); ++e, odo.advance()) {
            if (none.load(std::memory_order_relaxed) && many.load(std::memory_order_relaxed))
                return;
            counter.load(odo.current());
            auto count = counter.count(2);
            if (count == 0)
                none.store(true, std::memory_order_relaxed);
            else if (count >= 2)
                many.store(true, std::memory_order_relaxed);
        }
    });

    return AntinomyReport{none.load(), many.load(), ! is_nonsignaling(w)};
}

auto causal::antinomy_equivalence_holds(const ProcessTable & w, const ScanOptions & options) -> bool
{
    return antinomy_report(w, options).equivalence_holds();
}

auto causal::reduce(const ProcessTable & w, int k, std::span<const Symbol> mu_k) -> ProcessTable
{
    int n = w.parties();
    if (n < 2)
        throw InputError("reduction needs at least two parties");
    if (k < 0 || k >= n)
        throw InputError("party " + std::to_string(k) + " out of range");
    if (mu_k.size() != w.alphabet().input_sizes[k])
        throw InputError("local function of the reduced party has the wrong length");
    for (auto o : mu_k)
        if (o >= w.alphabet().output_sizes[k])
            throw InputError("local function of the reduced party emits an out-of-range symbol");
    if (! is_nonsignaling(w))
        throw InputError("reduction needs a component-wise non-signaling table");

    Alphabet reduced;
    for (int l = 0; l < n; ++l)
        if (l != k) {
            reduced.input_sizes.push_back(w.alphabet().input_sizes[l]);
            reduced.output_sizes.push_back(w.alphabet().output_sizes[l]);
        }

    return ProcessTable::from_function(reduced, [&](std::span<const Symbol> rest) {
        Assignment full(n);
        for (int l = 0, r = 0; l < n; ++l)
            full[l] = (l == k) ? 0 : rest[r++];
        // omega_k does not read o_k, so the placeholder above is harmless
        full[k] = mu_k[w.apply(full)[k]];
        auto inputs = w.apply(full);
        inputs.erase(inputs.begin() + k);
        return inputs;
    });
}

auto causal::quantum_lift(const ProcessTable & w) -> std::vector<LiftEntry>
{
    std::vector<LiftEntry> entries;
    entries.reserve(w.outputs().total());
    for (std::uint64_t o = 0; o < w.outputs().total(); ++o)
        entries.push_back(LiftEntry{w.outputs().decode(o), w.inputs().decode(w.row(o))});
    return entries;
}
