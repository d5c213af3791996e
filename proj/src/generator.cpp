#include "sudoku/generator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sudoku/dfs.hpp"

namespace sudoku {

const char* to_string(DifficultyLevel level) {
    switch (level) {
        case DifficultyLevel::ExtremelyEasy: return "extremely_easy";
        case DifficultyLevel::Easy: return "easy";
        case DifficultyLevel::Medium: return "medium";
        case DifficultyLevel::Difficult: return "difficult";
        case DifficultyLevel::Evil: return "evil";
    }
    return "unknown";
}

std::optional<DifficultyLevel> parse_level(std::string_view name) {
    for (auto level : kAllLevels) {
        if (name == to_string(level)) return level;
    }
    if (name == "extremely-easy") return DifficultyLevel::ExtremelyEasy;
    return std::nullopt;
}

const BoundsTable& table_25() {
    static const BoundsTable table = {{
        {382, std::nullopt, 14},
        {274, 381, 11},
        {243, 273, 7},
        {212, 242, 4},
        {166, 211, 0},
    }};
    return table;
}

BoundsTable bounds_table(int n) {
    if (n == 25) return table_25();
    const auto& base = table_25();
    const long long cells = static_cast<long long>(n) * n;
    BoundsTable out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].givens_min = static_cast<int>((base[i].givens_min * cells + 624) / 625);
        out[i].rowcol_lower_bound = base[i].rowcol_lower_bound * n / 25;
    }
    for (std::size_t i = 1; i < out.size(); ++i) out[i].givens_max = out[i - 1].givens_min - 1;
    return out;
}

Classification classify(const Grid& puzzle) {
    if (puzzle.size() != 25) {
        throw std::invalid_argument("the difficulty table is calibrated for 25x25 grids; "
                                    "pass a BoundsTable for other sizes");
    }
    return classify(puzzle, table_25());
}

Classification classify(const Grid& puzzle, const BoundsTable& table) {
    const int givens = puzzle.givens();
    for (auto level : kAllLevels) {
        const auto& b = table[static_cast<std::size_t>(level)];
        if (b.contains(givens)) {
            return {level, puzzle.min_rowcol_givens() >= b.rowcol_lower_bound};
        }
    }
    throw OutOfRange(std::to_string(givens) + " givens is outside every difficulty range");
}

int default_seeds_count(int n) {
    const int cells = n * n;
    const int scaled = static_cast<int>(std::lround(80.0 * cells / 625.0));
    return std::min(std::max(scaled, 11), cells - 1);
}

GeneratorParams default_params(int n, DifficultyLevel level, std::uint64_t seed) {
    GeneratorParams p;
    p.seeds_count = default_seeds_count(n);
    p.rng_seed = seed;
    p.difficulty = level;
    return p;
}

namespace {

// Randomized backtracking over the seed cells only, honoring peer constraints.
class SeedFiller {
public:
    SeedFiller(int n, std::vector<int> seeds, Rng& rng, const Deadline& deadline)
        : n_(n), b_(block_edge(n)), seeds_(std::move(seeds)), rng_(rng), deadline_(deadline),
          row_(n), col_(n), blk_(n), values_(seeds_.size()) {}

    bool fill() { return step(0); }
    Grid grid() const {
        Grid g(n_);
        for (std::size_t i = 0; i < seeds_.size(); ++i) g.set(seeds_[i] / n_, seeds_[i] % n_, values_[i]);
        return g;
    }

private:
    bool step(std::size_t i) {
        if (i == seeds_.size()) return true;
        if (deadline_.expired()) return false;
        const int r = seeds_[i] / n_;
        const int c = seeds_[i] % n_;
        const int k = (r / b_) * b_ + c / b_;
        std::uint64_t mask = (((1ull << n_) - 1) << 1) & ~(row_[r] | col_[c] | blk_[k]);
        std::vector<int> order;
        while (mask) {
            order.push_back(std::countr_zero(mask));
            mask &= mask - 1;
        }
        rng_.shuffle(std::span<int>(order));
        for (int v : order) {
            const std::uint64_t bit = 1ull << v;
            row_[r] |= bit;
            col_[c] |= bit;
            blk_[k] |= bit;
            values_[i] = v;
            if (step(i + 1)) return true;
            row_[r] &= ~bit;
            col_[c] &= ~bit;
            blk_[k] &= ~bit;
        }
        return false;
    }

    int n_;
    int b_;
    std::vector<int> seeds_;
    Rng& rng_;
    const Deadline& deadline_;
    std::vector<std::uint64_t> row_, col_, blk_;
    std::vector<int> values_;
};

}  // namespace

Grid generate_terminal_pattern(int n, const GeneratorParams& params, Rng& rng,
                               const Deadline& overall) {
    Grid empty(n);
    const int cells = n * n;
    if (params.seeds_count < 0 || params.seeds_count >= cells) {
        throw std::invalid_argument("seeds_count must lie in [0, n^2)");
    }
    if (params.terminal_timeout <= Clock::duration::zero()) {
        throw std::invalid_argument("terminal_timeout must be positive");
    }
    std::vector<int> order(cells);
    for (int attempt = 0; attempt <= params.max_restarts; ++attempt) {
        for (int i = 0; i < cells; ++i) order[i] = i;
        rng.shuffle(std::span<int>(order));
        std::vector<int> seeds(order.begin(), order.begin() + params.seeds_count);

        if (overall.expired()) throw TimeoutError();
        const auto deadline = overall.capped(params.terminal_timeout);
        SeedFiller filler(n, std::move(seeds), rng, deadline);
        if (!filler.fill()) continue;

        DfsSolver solver(filler.grid());
        auto result = solver.solve(deadline, &rng);
        if (result.status == DfsStatus::Solved) return std::move(*result.solution);
    }
    throw ExhaustedRetries("no terminal pattern after " + std::to_string(params.max_restarts) +
                           " restarts");
}

std::vector<CellRef> digging_sequence(DifficultyLevel level, int n, Rng& rng) {
    std::vector<CellRef> seq;
    seq.reserve(static_cast<std::size_t>(n) * n);
    switch (level) {
        case DifficultyLevel::ExtremelyEasy:
        case DifficultyLevel::Easy:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) seq.push_back({r, c});
            rng.shuffle(std::span<CellRef>(seq));
            break;
        case DifficultyLevel::Medium:
            for (int parity : {0, 1})
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c)
                        if ((r + c) % 2 == parity) seq.push_back({r, c});
            break;
        case DifficultyLevel::Difficult:
            for (int r = 0; r < n; ++r)
                for (int k = 0; k < n; ++k) seq.push_back({r, r % 2 == 0 ? k : n - 1 - k});
            break;
        case DifficultyLevel::Evil:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) seq.push_back({r, c});
            break;
    }
    return seq;
}

BoundsDraw draw_bounds(const DifficultyBounds& bounds, int n, Rng& rng) {
    const int hi = std::min(bounds.givens_max.value_or(n * n), n * n);
    const int lo = std::min(bounds.givens_min, hi);
    return {static_cast<int>(rng.uniform(lo, hi)), bounds.rowcol_lower_bound};
}

bool check_uniqueness_fast(const Grid& g, CellRef cell, const Deadline& deadline,
                           std::uint64_t* nodes, std::uint64_t max_nodes) {
    Grid probe = g;
    probe.clear(cell);
    return count_solutions(probe, 2, deadline, nodes, max_nodes) == 1;
}

bool check_uniqueness_reference(const Grid& g, CellRef cell, const Deadline& deadline,
                                std::uint64_t* nodes) {
    const int original = g.at(cell);
    Grid probe = g;
    std::uint64_t total = 0;
    bool unique = true;
    for (int v = 1; v <= g.size() && unique; ++v) {
        if (v == original) continue;
        probe.set(cell, v);
        DfsSolver solver(probe);
        const auto result = solver.solve(deadline);
        total += result.nodes;
        if (result.status == DfsStatus::Timeout) {
            if (nodes) *nodes = total;
            throw TimeoutError();
        }
        if (result.status == DfsStatus::Solved) unique = false;
    }
    if (nodes) *nodes = total;
    return unique;
}

Puzzle dig_holes(const Grid& terminal, DifficultyLevel level, BoundsDraw draw, Rng& rng,
                 const DigOptions& options) {
    if (!is_complete_valid_solution(terminal)) {
        throw std::invalid_argument("dig_holes needs a complete valid terminal pattern");
    }
    const int n = terminal.size();
    Grid grid = terminal;
    int givens = n * n;
    std::vector<int> row_count(n, n);
    std::vector<int> col_count(n, n);
    int timeouts = 0;

    for (const CellRef cell : digging_sequence(level, n, rng)) {
        if (givens - 1 < draw.givens_target || row_count[cell.row] - 1 < draw.rowcol_bound ||
            col_count[cell.col] - 1 < draw.rowcol_bound) {
            continue;
        }
        if (options.on_probe) options.on_probe(grid, cell);
        bool unique = false;
        try {
            unique = check_uniqueness_fast(grid, cell, options.deadline.capped(options.probe_timeout),
                                           nullptr, options.probe_node_limit);
        } catch (const TimeoutError&) {
            if (options.throw_on_timeout || options.deadline.expired()) throw;
            ++timeouts;
        }
        if (unique) {
            grid.clear(cell);
            --givens;
            --row_count[cell.row];
            --col_count[cell.col];
        }
    }

    Puzzle p{std::move(grid), level, GeneratorParams{}, grid_hash(terminal), draw, 0, timeouts};
    p.params.difficulty = level;
    return p;
}

Puzzle generate(int n, const GeneratorParams& params, const Deadline& deadline) {
    const auto table = bounds_table(n);
    const auto& bounds = table[static_cast<std::size_t>(params.difficulty)];
    Rng rng(params.rng_seed);
    DigOptions dig;
    dig.probe_timeout = params.probe_timeout;
    dig.probe_node_limit = params.probe_node_limit;
    dig.throw_on_timeout = params.restart_on_probe_timeout;
    dig.deadline = deadline;

    for (int attempt = 0; attempt <= params.max_restarts; ++attempt) {
        const Grid terminal = generate_terminal_pattern(n, params, rng, deadline);
        const BoundsDraw draw = draw_bounds(bounds, n, rng);
        Puzzle p{Grid(n), params.difficulty, params, 0, draw, attempt};
        try {
            p = dig_holes(terminal, params.difficulty, draw, rng, dig);
        } catch (const TimeoutError&) {
            if (deadline.expired()) throw;
            continue;
        }
        if (!bounds.contains(p.grid.givens()) ||
            p.grid.min_rowcol_givens() < bounds.rowcol_lower_bound) {
            continue;
        }
        if (count_solutions(p.grid, 2, deadline) != 1) {
            throw std::logic_error("generated puzzle failed independent uniqueness check");
        }
        p.params = params;
        p.restarts = attempt;
        return p;
    }
    throw ExhaustedRetries("no compliant " + std::string(to_string(params.difficulty)) +
                           " puzzle after " + std::to_string(params.max_restarts) + " restarts");
}

}  // namespace sudoku
