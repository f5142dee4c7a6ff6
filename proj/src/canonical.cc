#include <causal/canonical.hh>
#include <causal/errors.hh>

#include <array>
#include <utility>

using namespace causal;

namespace
{
    auto bit_position(int n, int i, int j) -> int
    {
        return n * n - 1 - (i * n + j);
    }

    /// Relabels a packed adjacency word by successive transpositions.
    class PackedMatrix
    {
    public:
        PackedMatrix(int n, std::uint64_t code) : _n(n), _code(code)
        {
            for (int k = 0; k < n; ++k) {
                std::uint64_t row = 0, col = 0;
                for (int t = 0; t < n; ++t) {
                    row |= std::uint64_t{1} << bit_position(n, k, t);
                    col |= std::uint64_t{1} << bit_position(n, t, k);
                }
                _row_mask[k] = row;
                _col_mask[k] = col;
            }
        }

        auto code() const -> std::uint64_t { return _code; }

        auto swap_labels(int a, int b) -> void
        {
            if (a > b)
                std::swap(a, b);
            int d = b - a;
            delta_swap(_col_mask[b], d);
            delta_swap(_row_mask[b], d * _n);
        }

    private:
        auto delta_swap(std::uint64_t low_mask, int shift) -> void
        {
            std::uint64_t t = ((_code >> shift) ^ _code) & low_mask;
            _code ^= t | (t << shift);
        }

        int _n;
        std::uint64_t _code;
        std::array<std::uint64_t, max_canonical_nodes> _row_mask{}, _col_mask{};
    };

    /// Visits every relabelling with Heap's algorithm; stops when `visit` returns false.
    template <typename Visit_>
    auto for_each_relabelling(int n, std::uint64_t code, Visit_ && visit) -> void
    {
        PackedMatrix m(n, code);
        if (! visit(m.code()))
            return;
        std::array<int, max_canonical_nodes> c{};
        int i = 1;
        while (i < n) {
            if (c[i] < i) {
                m.swap_labels(i % 2 == 0 ? 0 : c[i], i);
                if (! visit(m.code()))
                    return;
                ++c[i];
                i = 1;
            }
            else {
                c[i] = 0;
                ++i;
            }
        }
    }

    auto check_size(int n) -> void
    {
        if (n < 1 || n > max_canonical_nodes)
            throw InputError("canonical form supports 1.." + std::to_string(max_canonical_nodes) + " nodes, got " + std::to_string(n));
    }
}

auto CanonicalForm::to_string() const -> std::string
{
    std::string result(n * n, '0');
    for (int p = 0; p < n * n; ++p)
        if ((code >> (n * n - 1 - p)) & 1U)
            result[p] = '1';
    return result;
}

auto CanonicalForm::to_graph() const -> DiGraph
{
    check_size(n);
    DiGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((code >> bit_position(n, i, j)) & 1U)
                g.add_edge(i, j);
    return g;
}

auto CanonicalForm::parse(const std::string & bits) -> CanonicalForm
{
    int n = 0;
    while (n * n < static_cast<int>(bits.size()))
        ++n;
    if (n * n != static_cast<int>(bits.size()))
        throw InputError("canonical form length " + std::to_string(bits.size()) + " is not a square");
    check_size(n);
    CanonicalForm result{n, 0};
    for (char ch : bits) {
        if (ch != '0' && ch != '1')
            throw InputError("canonical form must consist of 0 and 1");
        result.code = (result.code << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return result;
}

auto causal::adjacency_code(const DiGraph & g) -> CanonicalForm
{
    check_size(g.size());
    CanonicalForm result{g.size(), 0};
    for (auto [u, v] : g.edges())
        result.code |= std::uint64_t{1} << bit_position(g.size(), u, v);
    return result;
}

auto causal::canonical_form(const DiGraph & g) -> CanonicalForm
{
    CanonicalForm result = adjacency_code(g);
    std::uint64_t best = result.code;
    for_each_relabelling(result.n, result.code, [&](std::uint64_t c) {
        if (c < best)
            best = c;
        return true;
    });
    result.code = best;
    return result;
}

auto causal::is_canonical(const CanonicalForm & form) -> bool
{
    check_size(form.n);
    bool minimal = true;
    for_each_relabelling(form.n, form.code, [&](std::uint64_t c) {
        if (c < form.code)
            minimal = false;
        return minimal;
    });
    return minimal;
}
