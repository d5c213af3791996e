#include "sudoku/puzzle_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sudoku {

std::string format_puzzle(const PuzzleFile& p) {
    const Grid& g = p.grid;
    std::ostringstream out;
    out << "{\n  \"size\": " << g.size() << ",\n";
    if (p.difficulty) out << "  \"difficulty\": " << nlohmann::json(*p.difficulty).dump() << ",\n";
    if (p.seed) out << "  \"seed\": " << *p.seed << ",\n";
    out << "  \"grid\": [\n";
    for (int r = 0; r < g.size(); ++r) {
        out << "    [";
        for (int c = 0; c < g.size(); ++c) {
            if (c) out << ", ";
            out << g.at(r, c);
        }
        out << (r + 1 < g.size() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

PuzzleFile parse_puzzle(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("malformed puzzle document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("grid") || !doc["grid"].is_array()) {
        throw ShapeError("puzzle document needs a `grid` array");
    }
    std::vector<std::vector<int>> raw;
    for (const auto& row : doc["grid"]) {
        if (!row.is_array()) throw ShapeError("grid rows must be arrays");
        auto& out = raw.emplace_back();
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw ValueError("grid cells must be integers");
            out.push_back(v.get<int>());
        }
    }
    PuzzleFile p{Grid::validate(raw), std::nullopt, std::nullopt};
    if (doc.contains("size") && doc["size"].get<int>() != p.grid.size()) {
        throw ShapeError("declared size " + doc["size"].dump() + " does not match grid");
    }
    if (doc.contains("difficulty") && doc["difficulty"].is_string()) {
        p.difficulty = doc["difficulty"].get<std::string>();
    }
    if (doc.contains("seed") && doc["seed"].is_number_integer()) {
        p.seed = doc["seed"].get<std::uint64_t>();
    }
    return p;
}

PuzzleFile read_puzzle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_puzzle(buf.str());
}

void write_puzzle(const std::filesystem::path& path, const PuzzleFile& p) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << format_puzzle(p);
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace sudoku
