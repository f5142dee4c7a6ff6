#include <causal/process_io.hh>
#include <causal/errors.hh>

#include <fstream>
#include <sstream>

using namespace causal;

namespace
{
    /// Yields non-comment, non-blank lines together with their line numbers.
    class LineReader
    {
    public:
        explicit LineReader(std::istream & in) : _in(in) { }

        auto next(std::string & line) -> bool
        {
            while (std::getline(_in, line)) {
                ++_line_no;
                auto p = line.find_first_not_of(" \t\r");
                if (p != std::string::npos && line[p] != '#')
                    return true;
            }
            return false;
        }

        auto error(const std::string & why) const -> InputError
        {
            return InputError("line " + std::to_string(_line_no) + ": " + why);
        }

    private:
        std::istream & _in;
        int _line_no = 0;
    };

    auto read_symbols(std::istringstream & tokens) -> std::vector<long long>
    {
        std::vector<long long> result;
        long long v;
        while (tokens >> v)
            result.push_back(v);
        return result;
    }

    template <typename Parse_>
    auto with_file(const std::string & path, Parse_ && parse)
    {
        std::ifstream in(path);
        if (! in)
            throw InputError("cannot open " + path);
        try {
            return parse(in);
        }
        catch (const InputError & e) {
            throw InputError(path + ": " + e.what());
        }
    }
}

auto causal::parse_process(std::istream & in) -> ProcessTable
{
    LineReader reader(in);
    std::string line;

    if (! reader.next(line))
        throw InputError("process input is empty");
    long long n;
    {
        std::istringstream tokens(line);
        std::string extra;
        if (! (tokens >> n) || (tokens >> extra) || n < 1 || n > 64)
            throw reader.error("expected the party count");
    }

    Alphabet alphabet;
    for (long long k = 0; k < n; ++k) {
        if (! reader.next(line))
            throw reader.error("missing alphabet line for party " + std::to_string(k));
        std::istringstream tokens(line);
        long long in_size, out_size;
        std::string extra;
        if (! (tokens >> in_size >> out_size) || (tokens >> extra) || in_size < 1 || out_size < 1
                || in_size > 0xffffffffLL || out_size > 0xffffffffLL)
            throw reader.error("expected '|I_k| |O_k|'");
        alphabet.input_sizes.push_back(static_cast<std::uint32_t>(in_size));
        alphabet.output_sizes.push_back(static_cast<std::uint32_t>(out_size));
    }

    MixedRadix inputs(alphabet.input_sizes), outputs(alphabet.output_sizes);
    std::vector<std::uint64_t> rows(outputs.total());
    std::vector<bool> seen(outputs.total(), false);
    std::uint64_t filled = 0;

    auto to_assignment = [&](const std::vector<long long> & raw, const std::vector<std::uint32_t> & sizes) {
        if (raw.size() != sizes.size())
            throw reader.error("expected " + std::to_string(sizes.size()) + " symbols on each side of ':'");
        Assignment a(raw.size());
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (raw[k] < 0 || raw[k] >= sizes[k])
                throw reader.error("symbol " + std::to_string(raw[k]) + " out of range for party " + std::to_string(k));
            a[k] = static_cast<Symbol>(raw[k]);
        }
        return a;
    };

    while (reader.next(line)) {
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw reader.error("expected 'o_0 ... : i_0 ...'");
        std::istringstream left(line.substr(0, colon)), right(line.substr(colon + 1));
        auto o = to_assignment(read_symbols(left), alphabet.output_sizes);
        auto i = to_assignment(read_symbols(right), alphabet.input_sizes);
        if (! left.eof() || ! right.eof())
            throw reader.error("non-numeric token");
        auto index = outputs.encode(o);
        if (seen[index])
            throw reader.error("duplicate row for this joint output");
        seen[index] = true;
        rows[index] = inputs.encode(i);
        ++filled;
    }

    if (filled != outputs.total())
        throw InputError("process table defines " + std::to_string(filled) + " of " + std::to_string(outputs.total()) + " rows");
    return ProcessTable(std::move(alphabet), std::move(rows));
}

auto causal::parse_process(const std::string & text) -> ProcessTable
{
    std::istringstream in(text);
    return parse_process(in);
}

auto causal::read_process_file(const std::string & path) -> ProcessTable
{
    return with_file(path, [](std::istream & in) { return parse_process(in); });
}

auto causal::format_process(const ProcessTable & w) -> std::string
{
    std::ostringstream out;
    out << w.parties() << '\n';
    for (int k = 0; k < w.parties(); ++k)
        out << w.alphabet().input_sizes[k] << ' ' << w.alphabet().output_sizes[k] << '\n';
    for (std::uint64_t o = 0; o < w.outputs().total(); ++o) {
        auto outs = w.outputs().decode(o);
        auto ins = w.inputs().decode(w.row(o));
        for (auto s : outs)
            out << s << ' ';
        out << ':';
        for (auto s : ins)
            out << ' ' << s;
        out << '\n';
    }
    return out.str();
}

auto causal::parse_experiment(std::istream & in) -> Experiment
{
    LineReader reader(in);
    std::string line;
    Experiment mu;
    while (reader.next(line)) {
        std::istringstream tokens(line);
        auto raw = read_symbols(tokens);
        if (! tokens.eof() || raw.empty())
            throw reader.error("expected a list of output symbols");
        std::vector<Symbol> table;
        for (auto v : raw) {
            if (v < 0 || v > 0xffffffffLL)
                throw reader.error("negative or oversized symbol");
            table.push_back(static_cast<Symbol>(v));
        }
        mu.tables.push_back(std::move(table));
    }
    if (mu.tables.empty())
        throw InputError("experiment input is empty");
    return mu;
}

auto causal::parse_experiment(const std::string & text) -> Experiment
{
    std::istringstream in(text);
    return parse_experiment(in);
}

auto causal::read_experiment_file(const std::string & path) -> Experiment
{
    return with_file(path, [](std::istream & in) { return parse_experiment(in); });
}

auto causal::format_experiment(const Experiment & mu) -> std::string
{
    std::string out;
    for (auto & table : mu.tables) {
        for (std::size_t i = 0; i < table.size(); ++i)
            out += (i ? " " : "") + std::to_string(table[i]);
        out += '\n';
    }
    return out;
}
