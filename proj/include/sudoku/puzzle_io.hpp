#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "sudoku/grid.hpp"

namespace sudoku {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contents of one puzzle file: `size`, `grid`, optional `difficulty` and `seed`.
struct PuzzleFile {
    Grid grid;
    std::optional<std::string> difficulty;
    std::optional<std::uint64_t> seed;
};

/// Byte-stable rendering: one grid row per line, trailing newline.
std::string format_puzzle(const PuzzleFile& p);
PuzzleFile parse_puzzle(const std::string& text);

PuzzleFile read_puzzle(const std::filesystem::path& path);
void write_puzzle(const std::filesystem::path& path, const PuzzleFile& p);

}  // namespace sudoku
