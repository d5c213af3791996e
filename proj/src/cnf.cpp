#include "sudoku/cnf.hpp"

#include <ostream>
#include <string>

namespace sudoku {

int var_index(CellRef cell, int value, int n) {
    if (n < 1 || cell.row < 0 || cell.row >= n || cell.col < 0 || cell.col >= n ||
        value < 1 || value > n) {
        throw RangeError("var_index argument out of range");
    }
    return cell.row * n * n + cell.col * n + (value - 1) + 1;
}

std::pair<CellRef, int> decode_var(int index, int n) {
    if (n < 1 || index < 1 || index > n * n * n) {
        throw RangeError("variable " + std::to_string(index) + " outside 1.." +
                         std::to_string(n * n * n));
    }
    const int z = index - 1;
    return {CellRef{z / (n * n), (z / n) % n}, z % n + 1};
}

namespace {

void add_at_most_one(std::vector<Clause>& out, const std::vector<int>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
            out.push_back({Literal(-vars[i]), Literal(-vars[j])});
        }
    }
}

}  // namespace

CnfFormula encode(const Grid& puzzle, EncodingMode mode, SymmetryBreaker symmetry) {
    const int n = puzzle.size();
    const int b = puzzle.block();
    CnfFormula f;
    f.var_count = n * n * n;
    f.grid_size = n;

    std::vector<int> group(n);
    // Cells, row-major: at-least-one then pairwise at-most-one.
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            for (int v = 1; v <= n; ++v) group[v - 1] = var_index({r, c}, v, n);
            Clause alo;
            alo.reserve(n);
            for (int var : group) alo.emplace_back(var);
            f.clauses.push_back(std::move(alo));
            add_at_most_one(f.clauses, group);
        }
    }

    if (mode == EncodingMode::Full) {
        for (int r = 0; r < n; ++r) {
            for (int v = 1; v <= n; ++v) {
                for (int c = 0; c < n; ++c) group[c] = var_index({r, c}, v, n);
                add_at_most_one(f.clauses, group);
            }
        }
        for (int c = 0; c < n; ++c) {
            for (int v = 1; v <= n; ++v) {
                for (int r = 0; r < n; ++r) group[r] = var_index({r, c}, v, n);
                add_at_most_one(f.clauses, group);
            }
        }
        for (int blk = 0; blk < n; ++blk) {
            const int r0 = (blk / b) * b;
            const int c0 = (blk % b) * b;
            for (int v = 1; v <= n; ++v) {
                for (int k = 0; k < n; ++k) group[k] = var_index({r0 + k / b, c0 + k % b}, v, n);
                add_at_most_one(f.clauses, group);
            }
        }
    }

    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (const int v = puzzle.at(r, c)) f.clauses.push_back({Literal(var_index({r, c}, v, n))});
        }
    }

    if (symmetry) symmetry(puzzle, f);
    return f;
}

Grid decode_model(const Model& m, int n) {
    if (static_cast<int>(m.values.size()) < n * n * n + 1) {
        throw AmbiguousCell("model does not cover all " + std::to_string(n * n * n) + " variables");
    }
    Grid g(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            int found = 0;
            for (int v = 1; v <= n; ++v) {
                if (!m[var_index({r, c}, v, n)]) continue;
                if (found) {
                    throw AmbiguousCell("cell (" + std::to_string(r) + "," + std::to_string(c) +
                                        ") has values " + std::to_string(found) + " and " +
                                        std::to_string(v));
                }
                found = v;
            }
            if (!found) {
                throw AmbiguousCell("cell (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") has no value");
            }
            g.set(r, c, found);
        }
    }
    return g;
}

bool satisfies_all(const CnfFormula& f, const Model& m) {
    for (const auto& clause : f.clauses) {
        bool sat = false;
        for (auto l : clause) {
            if (m.satisfies(l)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.var_count << ' ' << f.clauses.size() << '\n';
    for (const auto& clause : f.clauses) {
        for (auto l : clause) out << l.value << ' ';
        out << "0\n";
    }
}

}  // namespace sudoku
