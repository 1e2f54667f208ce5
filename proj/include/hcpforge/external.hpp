#pragma once

// Runs an external HCP/TSP solver as a child process under wall-clock and
// address-space caps, parses its tour and verifies it before trusting it.
//
// Command templates are run through /bin/sh. Placeholders:
//   {instance_path}  instance file (required, substituted shell-quoted)
//   {seed}           trial seed
//   {timeout}        wall-clock cap in whole seconds, rounded up
//   {tour_path}      file the solver should write its tour to; without it
//                    the tour is read from stdout
// A child that exits 0 with no tour at all counts as a give-up.

#include <sys/resource.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "hcpforge/error.hpp"
#include "hcpforge/graph.hpp"
#include "hcpforge/solver.hpp"
#include "hcpforge/tsplib.hpp"

namespace hcpforge {

enum class InputFormat { HCP, TSP_FULL_MATRIX };
enum class OutputParser { TSPLIB_TOUR, EDGE_LIST };

inline std::string_view to_string(InputFormat f) { return f == InputFormat::HCP ? "HCP" : "TSP_FULL_MATRIX"; }
inline std::string_view to_string(OutputParser p) { return p == OutputParser::TSPLIB_TOUR ? "TSPLIB_TOUR" : "EDGE_LIST"; }

inline InputFormat input_format_from_string(std::string_view s)
{
    if (s == "HCP") {
        return InputFormat::HCP;
    }
    if (s == "TSP_FULL_MATRIX" || s == "TSP") {
        return InputFormat::TSP_FULL_MATRIX;
    }
    throw InvalidArgument("unknown input format '" + std::string(s) + "' (expected HCP or TSP_FULL_MATRIX)");
}

inline OutputParser output_parser_from_string(std::string_view s)
{
    if (s == "TSPLIB_TOUR" || s == "TOUR") {
        return OutputParser::TSPLIB_TOUR;
    }
    if (s == "EDGE_LIST") {
        return OutputParser::EDGE_LIST;
    }
    throw InvalidArgument("unknown output parser '" + std::string(s) + "' (expected TSPLIB_TOUR or EDGE_LIST)");
}

struct ExternalSolverSpec {
    std::string command;
    InputFormat input = InputFormat::HCP;
    OutputParser output = OutputParser::TSPLIB_TOUR;
    std::optional<std::uint64_t> memory_bytes;

    void validate() const
    {
        if (command.find("{instance_path}") == std::string::npos) {
            throw InvalidArgument("solver command must contain {instance_path}");
        }
        if (memory_bytes && *memory_bytes == 0) {
            throw InvalidArgument("memory cap must be positive");
        }
    }
};

namespace detail {

inline std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += '\'';
    return out;
}

inline std::string substitute(std::string text, const std::string& key, const std::string& value)
{
    for (std::size_t at = text.find(key); at != std::string::npos; at = text.find(key, at + value.size())) {
        text.replace(at, key.size(), value);
    }
    return text;
}

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool mentions_memory(std::string text)
{
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const char* word : {"memory", "alloc", "memoryerror", "out of mem"}) {
        if (text.find(word) != std::string::npos) {
            return true;
        }
    }
    return false;
}

/// Scratch directory removed on scope exit.
class ScratchDir {
public:
    ScratchDir()
    {
        std::string pattern = (std::filesystem::temp_directory_path() / "hcpforge-XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr) {
            throw Error(std::string("mkdtemp failed: ") + std::strerror(errno));
        }
        path_ = pattern;
    }
    ~ScratchDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

struct ChildResult {
    bool timed_out = false;
    bool exited = false;
    int exit_code = 0;
    int signal = 0;
    long max_rss_kb = 0;
    double elapsed = 0.0;
};

/// Runs `sh -c command` in its own process group with stdout/stderr sent to
/// the given files. The whole group is killed when `wall_seconds` elapses.
inline ChildResult run_child(const std::string& command, const std::filesystem::path& out_path,
                             const std::filesystem::path& err_path, std::optional<double> wall_seconds,
                             std::optional<std::uint64_t> memory_bytes)
{
    const std::string out_str = out_path.string();
    const std::string err_str = err_path.string();
    const auto start = Clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) {
        throw Error(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        if (memory_bytes) {
            rlimit lim{static_cast<rlim_t>(*memory_bytes), static_cast<rlim_t>(*memory_bytes)};
            ::setrlimit(RLIMIT_AS, &lim);
        }
        const int out_fd = ::open(out_str.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        const int err_fd = ::open(err_str.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        const int null_fd = ::open("/dev/null", O_RDONLY);
        if (out_fd < 0 || err_fd < 0 || null_fd < 0) {
            ::_exit(127);
        }
        ::dup2(null_fd, STDIN_FILENO);
        ::dup2(out_fd, STDOUT_FILENO);
        ::dup2(err_fd, STDERR_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);

    ChildResult result;
    int status = 0;
    rusage usage{};
    auto pause = std::chrono::milliseconds(1);
    while (true) {
        const pid_t done = ::wait4(pid, &status, WNOHANG, &usage);
        if (done == pid) {
            break;
        }
        if (done < 0 && errno != EINTR) {
            throw Error(std::string("wait4 failed: ") + std::strerror(errno));
        }
        if (wall_seconds && seconds_since(start) > *wall_seconds) {
            result.timed_out = true;
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            while (::wait4(pid, &status, 0, &usage) < 0 && errno == EINTR) {
            }
            break;
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::milliseconds(20));
    }
    // Reap anything the shell left behind in the group.
    ::kill(-pid, SIGKILL);
    result.elapsed = seconds_since(start);
    result.max_rss_kb = usage.ru_maxrss;
    if (WIFEXITED(status)) {
        result.exited = true;
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.signal = WTERMSIG(status);
    }
    return result;
}

inline std::string first_line(const std::string& text)
{
    std::string line = text.substr(0, text.find('\n'));
    if (line.size() > 200) {
        line.resize(200);
    }
    return line;
}

} // namespace detail

/// Runs the solver on an instance file whose decoded graph is `g` (the
/// graph every returned tour is verified against).
inline SolverOutcome run_external(const ExternalSolverSpec& spec, const std::filesystem::path& instance_path,
                                  const Graph& g, std::uint64_t seed, const SolveBudget& budget)
{
    spec.validate();
    budget.validate();
    detail::ScratchDir scratch;
    const auto tour_path = scratch.path() / "solver.tour";
    const auto out_path = scratch.path() / "stdout.txt";
    const auto err_path = scratch.path() / "stderr.txt";
    const bool tour_file = spec.command.find("{tour_path}") != std::string::npos;

    std::string cmd = spec.command;
    cmd = detail::substitute(cmd, "{instance_path}", detail::shell_quote(instance_path.string()));
    cmd = detail::substitute(cmd, "{tour_path}", detail::shell_quote(tour_path.string()));
    cmd = detail::substitute(cmd, "{seed}", std::to_string(seed));
    const long timeout_secs = budget.wall_seconds ? static_cast<long>(std::ceil(*budget.wall_seconds)) : 0;
    cmd = detail::substitute(cmd, "{timeout}", std::to_string(timeout_secs));

    const auto memory = budget.memory_bytes ? budget.memory_bytes : spec.memory_bytes;
    const detail::ChildResult child = detail::run_child(cmd, out_path, err_path, budget.wall_seconds, memory);

    SolverOutcome out;
    out.elapsed = child.elapsed;
    if (child.timed_out) {
        out.status = SolveStatus::BUDGET_EXCEEDED;
        out.failure = FailureMode::timeout;
        out.detail = "killed after the wall-clock cap";
        return out;
    }
    const std::string err_text = detail::slurp(err_path);
    if (!child.exited || child.exit_code != 0) {
        const bool near_cap = memory && static_cast<std::uint64_t>(child.max_rss_kb) * 1024 >= *memory / 10 * 9;
        out.status = SolveStatus::ERROR;
        out.failure = (memory && (near_cap || detail::mentions_memory(err_text))) ? FailureMode::memory
                                                                                   : FailureMode::crash;
        out.detail = child.exited ? "exit code " + std::to_string(child.exit_code)
                                  : "killed by signal " + std::to_string(child.signal);
        if (out.failure == FailureMode::memory) {
            out.detail += " (memory cap)";
        }
        if (!err_text.empty()) {
            out.detail += ": " + detail::first_line(err_text);
        }
        return out;
    }

    std::string tour_text;
    if (tour_file) {
        tour_text = std::filesystem::exists(tour_path) ? detail::slurp(tour_path) : std::string{};
    } else {
        tour_text = detail::slurp(out_path);
    }
    if (std::all_of(tour_text.begin(), tour_text.end(), [](unsigned char c) { return std::isspace(c); })) {
        out.status = SolveStatus::BUDGET_EXCEEDED;
        out.failure = FailureMode::gave_up;
        out.detail = "solver returned no tour";
        return out;
    }
    std::optional<Tour> tour;
    try {
        std::istringstream in(tour_text);
        tour = spec.output == OutputParser::TSPLIB_TOUR ? read_tour(in, g.n()) : read_edge_list_tour(in, g.n());
    } catch (const Error& e) {
        out.status = SolveStatus::ERROR;
        out.failure = FailureMode::crash;
        out.detail = std::string("unparseable solver output: ") + e.what();
        return out;
    }
    if (!is_hamiltonian_cycle(g, *tour)) {
        if (spec.input == InputFormat::TSP_FULL_MATRIX) {
            // A TSP solver may honestly return a tour of positive length.
            out.status = SolveStatus::BUDGET_EXCEEDED;
            out.failure = FailureMode::gave_up;
            out.detail = "best tour has length " + std::to_string(tour_length(graph_to_tsp(g), *tour));
        } else {
            out.status = SolveStatus::ERROR;
            out.failure = FailureMode::crash;
            out.detail = "claimed tour is not a Hamiltonian cycle";
        }
        return out;
    }
    out.status = SolveStatus::FOUND;
    out.tour = std::move(tour);
    return out;
}

/// Convenience overload that reads the instance to obtain the graph.
inline SolverOutcome run_external(const ExternalSolverSpec& spec, const std::filesystem::path& instance_path,
                                  std::uint64_t seed, const SolveBudget& budget)
{
    const Graph g = spec.input == InputFormat::HCP ? read_hcp(instance_path) : tsp_to_graph(read_tsp(instance_path));
    return run_external(spec, instance_path, g, seed, budget);
}

/// Handle that writes each graph to a scratch file in the spec's input
/// format and runs the external solver on it.
inline SolverHandle external_solver(std::string name, ExternalSolverSpec spec)
{
    spec.validate();
    return {std::move(name), [spec](const Graph& g, std::uint64_t seed, const SolveBudget& budget) {
                detail::ScratchDir scratch;
                const auto path = scratch.path() / (spec.input == InputFormat::HCP ? "instance.hcp" : "instance.tsp");
                if (spec.input == InputFormat::HCP) {
                    write_hcp(path, g);
                } else {
                    write_tsp(path, graph_to_tsp(g));
                }
                return run_external(spec, path, g, seed, budget);
            }};
}

} // namespace hcpforge
