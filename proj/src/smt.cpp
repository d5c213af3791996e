#include "sudoku/smt.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <utility>

#include <json.hpp>

extern char** environ;

namespace sudoku::smt {

std::optional<ModelDialect> parse_dialect(std::string_view tag) {
    if (tag == "value-pairs" || tag == "get-value") return ModelDialect::ValuePairs;
    if (tag == "define-fun" || tag == "get-model") return ModelDialect::DefineFun;
    return std::nullopt;
}

const char* to_string(ModelDialect d) {
    return d == ModelDialect::ValuePairs ? "value-pairs" : "define-fun";
}

SmtScript emit(const Grid& puzzle, ModelDialect dialect) {
    const int n = puzzle.size();
    const int b = puzzle.block();
    SmtScript s;
    s.size = n;
    s.var_names.reserve(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            s.var_names.push_back("x_" + std::to_string(r) + "_" + std::to_string(c));
        }
    }

    std::ostringstream out;
    out << "(set-option :produce-models true)\n";
    out << "(set-logic QF_LIA)\n";
    for (const auto& v : s.var_names) out << "(declare-const " << v << " Int)\n";
    for (const auto& v : s.var_names) {
        out << "(assert (and (<= 1 " << v << ") (<= " << v << ' ' << n << ")))\n";
    }
    auto distinct = [&](auto&& cell_of) {
        out << "(assert (distinct";
        for (int k = 0; k < n; ++k) out << ' ' << s.name(cell_of(k));
        out << "))\n";
    };
    for (int r = 0; r < n; ++r) distinct([&](int k) { return CellRef{r, k}; });
    for (int c = 0; c < n; ++c) distinct([&](int k) { return CellRef{k, c}; });
    for (int blk = 0; blk < n; ++blk) {
        const int r0 = (blk / b) * b;
        const int c0 = (blk % b) * b;
        distinct([&](int k) { return CellRef{r0 + k / b, c0 + k % b}; });
    }
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (const int v = puzzle.at(r, c)) {
                out << "(assert (= " << s.name({r, c}) << ' ' << v << "))\n";
            }
        }
    }
    out << "(check-sat)\n";
    if (dialect == ModelDialect::ValuePairs) {
        out << "(get-value (";
        for (std::size_t i = 0; i < s.var_names.size(); ++i) {
            if (i) out << ' ';
            out << s.var_names[i];
        }
        out << "))\n";
    } else {
        out << "(get-model)\n";
    }
    out << "(exit)\n";
    s.text = out.str();
    return s;
}

namespace {

// Minimal s-expression reader for solver responses.
struct Sexp {
    std::string atom;
    std::vector<Sexp> items;
    bool is_list = false;
};

class SexpReader {
public:
    explicit SexpReader(std::string_view text) : text_(text) {}

    std::optional<Sexp> next() {
        skip_space();
        if (pos_ >= text_.size()) return std::nullopt;
        return read();
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    Sexp read() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of solver output");
        const char ch = text_[pos_];
        if (ch == ')') throw ParseError("unbalanced ')' in solver output");
        if (ch == '(') {
            ++pos_;
            Sexp list;
            list.is_list = true;
            for (;;) {
                skip_space();
                if (pos_ >= text_.size()) throw ParseError("unterminated list in solver output");
                if (text_[pos_] == ')') {
                    ++pos_;
                    return list;
                }
                list.items.push_back(read());
            }
        }
        Sexp atom;
        if (ch == '|' || ch == '"') {
            const auto close = text_.find(ch, pos_ + 1);
            if (close == std::string_view::npos) throw ParseError("unterminated quoted token");
            atom.atom = std::string(text_.substr(pos_ + 1, close - pos_ - 1));
            pos_ = close + 1;
            return atom;
        }
        const auto start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        atom.atom = std::string(text_.substr(start, pos_ - start));
        return atom;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<long long> int_value(const Sexp& e) {
    if (!e.is_list) {
        if (e.atom.empty()) return std::nullopt;
        long long v = 0;
        for (char ch : e.atom) {
            if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
            v = v * 10 + (ch - '0');
            if (v > (1ll << 40)) return std::nullopt;
        }
        return v;
    }
    if (e.items.size() == 2 && !e.items[0].is_list && e.items[0].atom == "-") {
        if (auto v = int_value(e.items[1])) return -*v;
    }
    return std::nullopt;
}

void collect_bindings(const Sexp& e, ModelDialect dialect,
                      std::unordered_map<std::string, long long>& out) {
    if (!e.is_list) return;
    if (dialect == ModelDialect::DefineFun) {
        // (define-fun name () Int value)
        if (e.items.size() == 5 && !e.items[0].is_list && e.items[0].atom == "define-fun" &&
            !e.items[1].is_list) {
            if (auto v = int_value(e.items[4])) out[e.items[1].atom] = *v;
            return;
        }
        for (const auto& item : e.items) collect_bindings(item, dialect, out);
        return;
    }
    // ((name value) ...)
    for (const auto& pair : e.items) {
        if (pair.is_list && pair.items.size() == 2 && !pair.items[0].is_list) {
            if (auto v = int_value(pair.items[1])) out[pair.items[0].atom] = *v;
        }
    }
}

}  // namespace

Grid parse_model(std::string_view solver_output, const std::vector<std::string>& var_names, int n,
                 ModelDialect dialect) {
    if (static_cast<int>(var_names.size()) != n * n) {
        throw std::invalid_argument("symbol table does not cover the grid");
    }
    std::unordered_map<std::string, long long> bindings;
    SexpReader reader(solver_output);
    while (auto e = reader.next()) {
        if (e->is_list && !e->items.empty() && !e->items[0].is_list && e->items[0].atom == "error") {
            throw ParseError("solver reported an error: " +
                             (e->items.size() > 1 ? e->items[1].atom : std::string()));
        }
        collect_bindings(*e, dialect, bindings);
    }
    Grid g(n);
    for (int i = 0; i < n * n; ++i) {
        const auto it = bindings.find(var_names[i]);
        if (it == bindings.end()) throw ParseError("model has no binding for " + var_names[i]);
        if (it->second < 1 || it->second > n) {
            throw RangeError(var_names[i] + " = " + std::to_string(it->second) + " outside [1, " +
                             std::to_string(n) + "]");
        }
        g.set(i / n, i % n, static_cast<int>(it->second));
    }
    return g;
}

std::optional<ExternalSolverConfig> default_config(std::string_view name) {
    if (name == "z3") {
        return ExternalSolverConfig{"z3", "z3", {"-smt2", "-in"}, ModelDialect::ValuePairs};
    }
    if (name == "cvc5") {
        return ExternalSolverConfig{"cvc5", "cvc5", {"--lang=smt2"}, ModelDialect::ValuePairs};
    }
    return std::nullopt;
}

ExternalSolverConfig with_env_override(ExternalSolverConfig cfg) {
    std::string key = "SUDOKU_SMT_";
    for (char ch : cfg.name) {
        key += std::isalnum(static_cast<unsigned char>(ch))
                   ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch)))
                   : '_';
    }
    if (const char* path = std::getenv(key.c_str()); path && *path) cfg.executable = path;
    return cfg;
}

std::map<std::string, ExternalSolverConfig> load_configs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solver config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("malformed solver config: " + std::string(e.what()));
    }
    std::map<std::string, ExternalSolverConfig> out;
    if (!doc.contains("solvers") || !doc["solvers"].is_object()) return out;
    for (const auto& [name, entry] : doc["solvers"].items()) {
        ExternalSolverConfig cfg = default_config(name).value_or(ExternalSolverConfig{name, name, {}});
        cfg.name = name;
        if (entry.contains("executable")) cfg.executable = entry["executable"].get<std::string>();
        if (entry.contains("args")) cfg.args = entry["args"].get<std::vector<std::string>>();
        if (entry.contains("dialect")) {
            const auto tag = entry["dialect"].get<std::string>();
            auto d = parse_dialect(tag);
            if (!d) throw std::runtime_error("unknown model dialect '" + tag + "' for " + name);
            cfg.dialect = *d;
        }
        if (entry.contains("timeout_s")) {
            const double secs = entry["timeout_s"].get<double>();
            if (!(secs > 0)) throw std::runtime_error("timeout_s must be positive for " + name);
            cfg.timeout = std::chrono::duration_cast<Clock::duration>(Seconds(secs));
        }
        out[name] = std::move(cfg);
    }
    return out;
}

bool executable_available(const std::string& executable) {
    if (executable.empty()) return false;
    if (executable.find('/') != std::string::npos) return ::access(executable.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (!path) return false;
    std::string_view rest(path);
    while (!rest.empty()) {
        const auto colon = rest.find(':');
        const auto dir = rest.substr(0, colon);
        const auto candidate = std::string(dir.empty() ? "." : dir) + "/" + executable;
        if (::access(candidate.c_str(), X_OK) == 0) return true;
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
    }
    return false;
}

namespace {

// Owns a file descriptor.
class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
    Fd& operator=(Fd&& o) noexcept {
        if (this != &o) {
            reset();
            fd_ = std::exchange(o.fd_, -1);
        }
        return *this;
    }
    ~Fd() { reset(); }

    int get() const { return fd_; }
    void reset() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_ = -1;
};

// Unlinks the path on destruction.
struct TempFile {
    std::string path;
    Fd fd;

    explicit TempFile(const char* tag) {
        auto pattern = (std::filesystem::temp_directory_path() / (std::string("sudoku-") + tag + "-XXXXXX")).string();
        std::vector<char> buf(pattern.begin(), pattern.end());
        buf.push_back('\0');
        const int raw = ::mkostemp(buf.data(), O_CLOEXEC);
        if (raw < 0) throw std::runtime_error("cannot create temp file: " + std::string(std::strerror(errno)));
        path.assign(buf.data());
        fd = Fd(raw);
    }
    ~TempFile() { ::unlink(path.c_str()); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
};

void write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const auto n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error("write failed: " + std::string(std::strerror(errno)));
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The first top-level atom of the response.
std::string verdict_of(std::string_view output) {
    try {
        SexpReader reader(output);
        while (auto e = reader.next()) {
            if (!e->is_list) return e->atom;
        }
    } catch (const ParseError&) {
    }
    return {};
}

}  // namespace

ExternalOutcome run_external(const ExternalSolverConfig& cfg, const SmtScript& script,
                             const Deadline& deadline) {
    if (cfg.timeout <= Clock::duration::zero()) {
        throw std::invalid_argument("external solver timeout must be positive");
    }
    if (!executable_available(cfg.executable)) {
        throw SolverNotFound("solver executable '" + cfg.executable + "' not found");
    }

    TempFile input("in");
    write_all(input.fd.get(), script.text);
    TempFile errors("err");

    int pipefd[2];
    if (::pipe2(pipefd, O_CLOEXEC) != 0) {
        throw std::runtime_error("pipe failed: " + std::string(std::strerror(errno)));
    }
    Fd out_read(pipefd[0]);
    Fd out_write(pipefd[1]);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 0, input.path.c_str(), O_RDONLY, 0);
    posix_spawn_file_actions_adddup2(&actions, out_write.get(), 1);
    posix_spawn_file_actions_addopen(&actions, 2, errors.path.c_str(), O_WRONLY | O_TRUNC, 0);
    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);

    std::vector<std::string> argv_store;
    argv_store.push_back(cfg.executable);
    argv_store.insert(argv_store.end(), cfg.args.begin(), cfg.args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    argv.push_back(nullptr);

    const auto start = Clock::now();
    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, cfg.executable.c_str(), &actions, &attr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    if (rc != 0) {
        if (rc == ENOENT || rc == EACCES) {
            throw SolverNotFound("cannot execute '" + cfg.executable + "': " + std::strerror(rc));
        }
        throw std::runtime_error("posix_spawnp failed: " + std::string(std::strerror(rc)));
    }
    out_write.reset();

    auto hard_stop = start + cfg.timeout;
    if (auto at = deadline.at(); at && *at < hard_stop) hard_stop = *at;

    // The watchdog kills the process group on timeout; the child is reaped
    // only after the watchdog has been joined, so the pid cannot be reused.
    std::mutex mu;
    std::condition_variable cv;
    bool finished = false;
    bool killed = false;
    std::thread watchdog([&] {
        std::unique_lock lock(mu);
        for (;;) {
            const auto wake = std::min(hard_stop, Clock::now() + std::chrono::milliseconds(20));
            if (cv.wait_until(lock, wake, [&] { return finished; })) return;
            if (Clock::now() >= hard_stop || deadline.stop_token().stop_requested()) {
                ::kill(-pid, SIGKILL);
                killed = true;
                return;
            }
        }
    });

    std::string output;
    char buf[1 << 14];
    for (;;) {
        const auto n = ::read(out_read.get(), buf, sizeof buf);
        if (n > 0) {
            output.append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
            break;
        }
    }
    {
        std::lock_guard lock(mu);
        finished = true;
    }
    cv.notify_all();
    watchdog.join();

    int wstatus = 0;
    while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
    }
    ExternalOutcome result;
    result.elapsed = Clock::now() - start;
    result.output = output;

    if (killed) {
        result.status = SolveStatus::Timeout;
        return result;
    }
    const auto verdict = verdict_of(output);
    if (verdict == "sat") {
        result.status = SolveStatus::Sat;
        result.solution = parse_model(output, script.var_names, script.size, cfg.dialect);
        return result;
    }
    if (verdict == "unsat") {
        result.status = SolveStatus::Unsat;
        return result;
    }
    std::string detail;
    if (WIFEXITED(wstatus)) {
        detail = "exit code " + std::to_string(WEXITSTATUS(wstatus));
    } else if (WIFSIGNALED(wstatus)) {
        detail = "signal " + std::to_string(WTERMSIG(wstatus));
    }
    auto err = read_file(errors.path);
    if (err.size() > 400) err.resize(400);
    throw SolverCrashed(cfg.name + " gave no verdict (" + detail + ", verdict '" + verdict +
                        "'): " + err);
}

}  // namespace sudoku::smt
