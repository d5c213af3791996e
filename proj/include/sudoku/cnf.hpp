#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sudoku/grid.hpp"

namespace sudoku {

/// Signed DIMACS-style literal: |value| is the variable, the sign its polarity.
struct Literal {
    int value = 0;

    constexpr Literal() = default;
    constexpr explicit Literal(int v) : value(v) {}

    constexpr int var() const { return value < 0 ? -value : value; }
    constexpr bool positive() const { return value > 0; }
    constexpr Literal operator-() const { return Literal(-value); }

    friend constexpr bool operator==(Literal, Literal) = default;
    friend constexpr auto operator<=>(Literal, Literal) = default;
};

using Clause = std::vector<Literal>;

class AmbiguousCell : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Which constraint groups encode() emits.
enum class EncodingMode {
    /// Cell exactly-one, pairwise row/column/block at-most-one, given units.
    Full,
    /// Cell exactly-one and given units; unit uniqueness is left to a theory.
    TheoryOnly,
};

struct CnfFormula {
    int var_count = 0;
    std::vector<Clause> clauses;
    /// Grid edge of the Sudoku index scheme; 0 for formulas not built by encode().
    int grid_size = 0;
};

/// Total assignment over 1..var_count; index 0 is unused.
struct Model {
    std::vector<bool> values;

    bool operator[](int var) const { return values[var]; }
    bool satisfies(Literal l) const { return values[l.var()] == l.positive(); }
};

/// row*n^2 + col*n + (value-1) + 1, a bijection onto 1..n^3.
int var_index(CellRef cell, int value, int n);
std::pair<CellRef, int> decode_var(int index, int n);

/// Extension point for symmetry-breaking clauses; ships empty.
using SymmetryBreaker = void (*)(const Grid&, CnfFormula&);

CnfFormula encode(const Grid& puzzle, EncodingMode mode = EncodingMode::Full,
                  SymmetryBreaker symmetry = nullptr);

/// Throws AmbiguousCell unless every cell has exactly one true value variable.
Grid decode_model(const Model& m, int n);

bool satisfies_all(const CnfFormula& f, const Model& m);

/// `p cnf <vars> <clauses>` followed by zero-terminated clause lines.
void write_dimacs(std::ostream& out, const CnfFormula& f);

}  // namespace sudoku
