#include "sudoku/bench.hpp"

#include <algorithm>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "sudoku/puzzle_io.hpp"

namespace sudoku {

const char* to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::Sat: return "sat";
        case RecordStatus::Unsat: return "unsat";
        case RecordStatus::Timeout: return "timeout";
        case RecordStatus::Error: return "error";
        case RecordStatus::InvalidSolution: return "invalid_solution";
    }
    return "error";
}

std::optional<RecordStatus> parse_record_status(std::string_view s) {
    for (auto st : {RecordStatus::Sat, RecordStatus::Unsat, RecordStatus::Timeout,
                    RecordStatus::Error, RecordStatus::InvalidSolution}) {
        if (s == to_string(st)) return st;
    }
    return std::nullopt;
}

namespace {

// Result slot shared with a worker thread that may outlive the wait.
struct RunSlot {
    std::mutex mu;
    std::condition_variable cv;
    bool done = false;
    std::optional<GridOutcome> outcome;
    std::string error;
    Clock::time_point finished;
};

BenchRecord run_one(const NamedSolver& solver, const BenchPuzzle& puzzle, const BenchOptions& options) {
    BenchRecord rec;
    rec.solver_name = solver.name;
    rec.puzzle_id = puzzle.id;
    rec.difficulty = puzzle.difficulty;

    auto slot = std::make_shared<RunSlot>();
    std::stop_source stop;
    const auto budget = std::chrono::duration_cast<Clock::duration>(options.timeout);
    const auto start = Clock::now();
    const auto deadline = Deadline::after(budget, stop.get_token());

    std::thread worker([slot, run = solver.run, grid = puzzle.grid, deadline] {
        std::optional<GridOutcome> outcome;
        std::string error;
        try {
            outcome = run(grid, deadline);
        } catch (const std::exception& e) {
            error = e.what();
            if (error.empty()) error = "solver threw";
        } catch (...) {
            error = "solver threw a non-standard exception";
        }
        std::lock_guard lock(slot->mu);
        slot->outcome = std::move(outcome);
        slot->error = std::move(error);
        slot->finished = Clock::now();
        slot->done = true;
        slot->cv.notify_all();
    });

    const auto hard_stop =
        start + std::chrono::duration_cast<Clock::duration>(options.timeout * (1.0 + options.watchdog_grace));
    std::unique_lock lock(slot->mu);
    const bool finished = slot->cv.wait_until(lock, hard_stop, [&] { return slot->done; });
    if (!finished) {
        lock.unlock();
        stop.request_stop();
        worker.detach();
        rec.status = RecordStatus::Timeout;
        rec.solve_time = Seconds(Clock::now() - start).count();
        rec.message = "abandoned by watchdog";
        return rec;
    }
    rec.solve_time = Seconds(slot->finished - start).count();
    auto outcome = std::move(slot->outcome);
    const auto error = std::move(slot->error);
    lock.unlock();
    worker.join();

    if (!outcome) {
        rec.status = RecordStatus::Error;
        rec.message = error;
        return rec;
    }
    rec.propagations = outcome->propagations;
    if (outcome->status != SolveStatus::Timeout && rec.solve_time > options.timeout.count()) {
        // Finished, but past the limit: the answer does not count.
        rec.status = RecordStatus::Timeout;
        rec.message = "finished after the timeout";
        return rec;
    }
    switch (outcome->status) {
        case SolveStatus::Sat:
            if (outcome->solution && outcome->solution->size() == puzzle.grid.size() &&
                is_complete_valid_solution(*outcome->solution) &&
                respects_givens(*outcome->solution, puzzle.grid)) {
                rec.status = RecordStatus::Sat;
                rec.solution = std::move(outcome->solution);
            } else {
                rec.status = RecordStatus::InvalidSolution;
            }
            break;
        case SolveStatus::Unsat: rec.status = RecordStatus::Unsat; break;
        case SolveStatus::Timeout: rec.status = RecordStatus::Timeout; break;
    }
    if (rec.propagations && rec.solve_time > 0) {
        rec.propagation_rate = static_cast<double>(*rec.propagations) / rec.solve_time;
    }
    return rec;
}

}  // namespace

std::vector<BenchRecord> run_suite(const std::vector<NamedSolver>& solvers,
                                   const std::vector<BenchPuzzle>& puzzles,
                                   const BenchOptions& options) {
    if (!(options.timeout.count() > 0)) throw std::invalid_argument("timeout must be positive");
    auto run_solver = [&](const NamedSolver& s) {
        std::vector<BenchRecord> out;
        out.reserve(puzzles.size());
        for (const auto& p : puzzles) out.push_back(run_one(s, p, options));
        return out;
    };

    std::vector<BenchRecord> records;
    if (options.parallel_solvers) {
        std::vector<std::future<std::vector<BenchRecord>>> jobs;
        for (const auto& s : solvers) jobs.push_back(std::async(std::launch::async, run_solver, std::cref(s)));
        for (auto& j : jobs) {
            auto part = j.get();
            records.insert(records.end(), part.begin(), part.end());
        }
    } else {
        for (const auto& s : solvers) {
            auto part = run_solver(s);
            records.insert(records.end(), part.begin(), part.end());
        }
    }
    return records;
}

std::vector<BenchAggregate> aggregate(const std::vector<BenchRecord>& records) {
    if (records.empty()) throw EmptyInput("no benchmark records to aggregate");
    struct Acc {
        int total = 0;
        int solved = 0;
        double time = 0;
        double props = 0;
        int props_n = 0;
    };
    std::map<std::string, Acc> by_solver;
    for (const auto& r : records) {
        auto& a = by_solver[r.solver_name];
        ++a.total;
        if (r.status != RecordStatus::Sat) continue;
        ++a.solved;
        a.time += r.solve_time;
        if (r.propagations) {
            a.props += static_cast<double>(*r.propagations);
            ++a.props_n;
        }
    }
    std::vector<BenchAggregate> out;
    for (const auto& [name, a] : by_solver) {
        BenchAggregate g;
        g.solver = name;
        g.total = a.total;
        g.solved = a.solved;
        g.success_rate = static_cast<double>(a.solved) / a.total;
        if (a.solved) g.avg_solve_time = a.time / a.solved;
        if (a.props_n) g.avg_propagations = a.props / a.props_n;
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string utc_stamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

}  // namespace

ExportPaths export_csv(const std::vector<BenchRecord>& records,
                       const std::vector<BenchAggregate>& aggregates,
                       const std::filesystem::path& out_dir, bool timings_untrusted) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir)) throw IoError("cannot create " + out_dir.string());

    const auto stamp = utc_stamp();
    ExportPaths paths;
    for (int k = 0;; ++k) {
        const auto tag = k == 0 ? stamp : stamp + "_" + std::to_string(k);
        paths.results = out_dir / ("results_" + tag + ".csv");
        paths.summary = out_dir / ("summary_" + tag + ".csv");
        if (!std::filesystem::exists(paths.results) && !std::filesystem::exists(paths.summary)) break;
    }

    auto sorted = records;
    std::stable_sort(sorted.begin(), sorted.end(), [](const BenchRecord& a, const BenchRecord& b) {
        return std::tie(a.solver_name, a.puzzle_id) < std::tie(b.solver_name, b.puzzle_id);
    });

    {
        std::ofstream out(paths.results, std::ios::binary);
        if (!out) throw IoError("cannot write " + paths.results.string());
        if (timings_untrusted) out << "# timings untrusted: solvers ran concurrently\n";
        out << "solver,puzzle_id,difficulty,status,solve_time_s,propagations,propagation_rate\n";
        for (const auto& r : sorted) {
            out << csv_field(r.solver_name) << ',' << csv_field(r.puzzle_id) << ','
                << csv_field(r.difficulty) << ',' << to_string(r.status) << ','
                << fixed(r.solve_time, 6) << ','
                << (r.propagations ? std::to_string(*r.propagations) : std::string()) << ','
                << (r.propagation_rate ? fixed(*r.propagation_rate, 3) : std::string()) << '\n';
        }
        if (!out) throw IoError("write failed for " + paths.results.string());
    }
    {
        std::ofstream out(paths.summary, std::ios::binary);
        if (!out) throw IoError("cannot write " + paths.summary.string());
        out << "# avg_time_s averages solved runs only; avg_propagations averages solved runs "
               "that report a count\n";
        if (timings_untrusted) out << "# timings untrusted: solvers ran concurrently\n";
        out << "solver,total,solved,success_rate,avg_time_s,avg_propagations\n";
        for (const auto& a : aggregates) {
            out << csv_field(a.solver) << ',' << a.total << ',' << a.solved << ','
                << fixed(a.success_rate, 4) << ','
                << (a.avg_solve_time ? fixed(*a.avg_solve_time, 6) : std::string()) << ','
                << (a.avg_propagations ? fixed(*a.avg_propagations, 1) : std::string()) << '\n';
        }
        if (!out) throw IoError("write failed for " + paths.summary.string());
    }
    return paths;
}

std::vector<BenchRecord> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<BenchRecord> out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw IoError("malformed results row: " + line);
        BenchRecord r;
        r.solver_name = f[0];
        r.puzzle_id = f[1];
        r.difficulty = f[2];
        const auto st = parse_record_status(f[3]);
        if (!st) throw IoError("unknown status '" + f[3] + "'");
        r.status = *st;
        r.solve_time = std::stod(f[4]);
        if (!f[5].empty()) r.propagations = std::stoull(f[5]);
        if (!f[6].empty()) r.propagation_rate = std::stod(f[6]);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_summary(const std::vector<BenchAggregate>& aggregates) {
    std::ostringstream out;
    out << std::left << std::setw(14) << "solver" << std::right << std::setw(7) << "total"
        << std::setw(8) << "solved" << std::setw(10) << "success%" << std::setw(12) << "avg_time_s"
        << std::setw(16) << "avg_props" << '\n';
    for (const auto& a : aggregates) {
        out << std::left << std::setw(14) << a.solver << std::right << std::setw(7) << a.total
            << std::setw(8) << a.solved << std::setw(10) << fixed(100.0 * a.success_rate, 1)
            << std::setw(12) << (a.avg_solve_time ? fixed(*a.avg_solve_time, 4) : "-")
            << std::setw(16) << (a.avg_propagations ? fixed(*a.avg_propagations, 1) : "-") << '\n';
    }
    return out.str();
}

}  // namespace sudoku
