#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sudoku/deadline.hpp"
#include "sudoku/grid.hpp"
#include "sudoku/rng.hpp"

namespace sudoku {

enum class DifficultyLevel { ExtremelyEasy, Easy, Medium, Difficult, Evil };

inline constexpr std::array kAllLevels = {DifficultyLevel::ExtremelyEasy, DifficultyLevel::Easy,
                                          DifficultyLevel::Medium, DifficultyLevel::Difficult,
                                          DifficultyLevel::Evil};

/// Lowercase snake form: extremely_easy, easy, medium, difficult, evil.
const char* to_string(DifficultyLevel level);
std::optional<DifficultyLevel> parse_level(std::string_view name);

struct DifficultyBounds {
    int givens_min = 0;
    /// nullopt means unbounded above.
    std::optional<int> givens_max;
    int rowcol_lower_bound = 0;

    bool contains(int givens) const {
        return givens >= givens_min && (!givens_max || givens <= *givens_max);
    }
};

/// Indexed by DifficultyLevel.
using BoundsTable = std::array<DifficultyBounds, 5>;

/// The 25x25 mapping: givens ranges and per-row/column lower bounds.
const BoundsTable& table_25();

/// table_25() at n = 25. Other sizes scale the givens floors by n^2/625
/// (rounded up) and the row/column bounds by n/25 (rounded down), keeping
/// the ranges contiguous. Not a calibrated table.
BoundsTable bounds_table(int n);

class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct Classification {
    DifficultyLevel level;
    bool bound_satisfied;
};

/// Table lookup by givens count; requires a 25x25 grid.
Classification classify(const Grid& puzzle);
Classification classify(const Grid& puzzle, const BoundsTable& table);

/// round(80 n^2 / 625), at least 11, below n^2.
int default_seeds_count(int n);

/// Search nodes a uniqueness probe may expand before it counts as timed out.
inline constexpr std::uint64_t kDefaultProbeNodes = 100;

struct GeneratorParams {
    int seeds_count = 80;
    Clock::duration terminal_timeout = std::chrono::seconds(5);
    std::uint64_t rng_seed = 0;
    DifficultyLevel difficulty = DifficultyLevel::Easy;
    int max_restarts = 100;
    /// Budget for each uniqueness probe while digging. The node cap makes
    /// the outcome machine-independent; the wall-clock limit is a backstop.
    std::uint64_t probe_node_limit = kDefaultProbeNodes;
    Clock::duration probe_timeout = std::chrono::seconds(60);
    /// Abandon the terminal pattern when a probe times out instead of
    /// keeping the cell.
    bool restart_on_probe_timeout = false;
};

GeneratorParams default_params(int n, DifficultyLevel level, std::uint64_t seed);

class ExhaustedRetries : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BoundsDraw {
    int givens_target = 0;
    int rowcol_bound = 0;
};

struct Puzzle {
    Grid grid;
    DifficultyLevel difficulty;
    GeneratorParams params;
    std::uint64_t terminal_hash = 0;
    BoundsDraw draw;
    int restarts = 0;
    /// Probes that ran out of time; their cells kept their values.
    int probe_timeouts = 0;
};

/// Las Vegas terminal pattern: random seed cells filled consistently, then
/// completed by randomized MRV search under params.terminal_timeout,
/// restarting from fresh seeds on failure.
/// Throws TimeoutError once `deadline` passes.
Grid generate_terminal_pattern(int n, const GeneratorParams& params, Rng& rng,
                               const Deadline& deadline = {});

/// Order in which cells are considered for digging; a permutation of all cells.
std::vector<CellRef> digging_sequence(DifficultyLevel level, int n, Rng& rng);

/// Givens target drawn uniformly from the level's range (capped at n^2 when
/// unbounded); the row/column bound is the level's bound.
BoundsDraw draw_bounds(const DifficultyBounds& bounds, int n, Rng& rng);

struct DigOptions {
    std::uint64_t probe_node_limit = kDefaultProbeNodes;
    Clock::duration probe_timeout = std::chrono::seconds(60);
    /// When false a timed-out probe leaves the cell filled: the puzzle stays
    /// unique, it just keeps one more given than it might have.
    bool throw_on_timeout = false;
    /// Overall budget for the dig; once it passes the dig throws TimeoutError.
    Deadline deadline;
    /// Called before each uniqueness probe with the current grid (cell still filled).
    std::function<void(const Grid&, CellRef)> on_probe;
};

/// Walks the digging sequence once. A cell is dug only if the givens target
/// and row/column bound still hold afterwards and the puzzle stays unique.
/// Throws TimeoutError on a timed-out probe if options.throw_on_timeout.
Puzzle dig_holes(const Grid& terminal, DifficultyLevel level, BoundsDraw draw, Rng& rng,
                 const DigOptions& options = {});

/// Erase the cell and count completions up to two. max_nodes caps the
/// search as in count_solutions.
bool check_uniqueness_fast(const Grid& g, CellRef cell, const Deadline& deadline = {},
                           std::uint64_t* nodes = nullptr, std::uint64_t max_nodes = 0);

/// Try each of the n-1 other values in the cell; unique iff none of them
/// admits a solution.
bool check_uniqueness_reference(const Grid& g, CellRef cell, const Deadline& deadline = {},
                                std::uint64_t* nodes = nullptr);

/// Full pipeline with restarts; the result is re-verified unique and
/// compliant with bounds_table(n) for the requested level. Throws
/// TimeoutError once `deadline` passes and ExhaustedRetries after
/// params.max_restarts failed digs.
Puzzle generate(int n, const GeneratorParams& params, const Deadline& deadline = {});

}  // namespace sudoku
