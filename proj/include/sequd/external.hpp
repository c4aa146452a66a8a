#pragma once

// Black-box objectives run as child processes. The child is spawned directly
// from an argv vector (no shell), receives one JSON line on stdin:
//     {"params": {...}, "trial": 7}
// and reports the objective as the last non-empty line of stdout. A nonzero
// exit status, a timeout or an unparseable/non-finite value is a failed trial.
// POSIX only.

#include <poll.h>
#include <spawn.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sequd/history.hpp"
#include "sequd/param_space.hpp"

extern char** environ;

namespace sequd {

enum class FailurePolicy {
    record,  ///< failed trial gets the worst value and the run continues
    abort    ///< the first failed trial stops the run with ObjectiveError
};

struct ExternalObjectiveSpec {
    /// Program and arguments. The token "{trial}" is replaced by the trial index.
    std::vector<std::string> argv;
    double timeout_seconds = 60.0;
    FailurePolicy failure_policy = FailurePolicy::record;

    void validate() const {
        if (argv.empty() || argv.front().empty()) throw std::invalid_argument("external objective: empty command");
        if (!(timeout_seconds > 0.0)) throw std::invalid_argument("external objective: timeout must be positive");
    }
};

/// Parses the last non-empty line of `out` as a finite float.
inline std::optional<double> parse_objective_output(std::string_view out) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    std::size_t end = out.size();
    while (end > 0) {
        std::size_t begin = out.rfind('\n', end - 1);
        begin = begin == std::string_view::npos ? 0 : begin + 1;
        std::string_view line = out.substr(begin, end - begin);
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
        if (!line.empty()) {
            if (line.front() == '+') line.remove_prefix(1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
            if (ec != std::errc{} || ptr != line.data() + line.size() || !std::isfinite(v)) return std::nullopt;
            return v;
        }
        if (begin == 0) break;
        end = begin - 1;
    }
    return std::nullopt;
}

namespace detail {

struct Pipe {
    int fd[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fd, O_CLOEXEC) != 0) throw ObjectiveError(std::string("pipe: ") + std::strerror(errno));
    }
    ~Pipe() { close_both(); }
    Pipe(const Pipe&) = delete;
    Pipe& operator=(const Pipe&) = delete;
    void close_end(int i) {
        if (fd[i] >= 0) ::close(fd[i]);
        fd[i] = -1;
    }
    void close_both() {
        close_end(0);
        close_end(1);
    }
};

inline void ignore_sigpipe_once() {
    static const bool done = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

}  // namespace detail

/// Runs one trial. Spawn failures (missing program, fd exhaustion) are
/// reported as failures too; the caller decides whether to escalate.
inline EvalOutcome evaluate_external(const ExternalObjectiveSpec& spec, const TrialConfig& config, std::size_t trial) {
    spec.validate();
    detail::ignore_sigpipe_once();

    std::vector<std::string> args = spec.argv;
    for (auto& a : args) {
        for (std::size_t pos = a.find("{trial}"); pos != std::string::npos; pos = a.find("{trial}", pos)) {
            const std::string t = std::to_string(trial);
            a.replace(pos, 7, t);
            pos += t.size();
        }
    }
    std::vector<char*> cargv;
    for (auto& a : args) cargv.push_back(a.data());
    cargv.push_back(nullptr);

    detail::Pipe in;
    detail::Pipe out;
    detail::Pipe err;
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.fd[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out.fd[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err.fd[1], STDERR_FILENO);
    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) return EvalOutcome::failure("cannot spawn '" + args[0] + "': " + std::strerror(rc));
    in.close_end(0);
    out.close_end(1);
    err.close_end(1);

    nlohmann::json msg = {{"params", config.to_json()}, {"trial", trial}};
    const std::string payload = msg.dump() + "\n";
    std::size_t written = 0;
    while (written < payload.size()) {
        const ssize_t w = ::write(in.fd[1], payload.data() + written, payload.size() - written);
        if (w < 0 && errno == EINTR) continue;
        if (w <= 0) break;  // child closed stdin early; it may not need the payload
        written += static_cast<std::size_t>(w);
    }
    in.close_end(1);

    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                             std::chrono::duration<double>(spec.timeout_seconds));
    std::string stdout_text;
    std::string stderr_text;
    bool timed_out = false;
    char buf[4096];
    while (out.fd[0] >= 0 || err.fd[0] >= 0) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
        if (left <= 0) {
            timed_out = true;
            break;
        }
        pollfd fds[2] = {{out.fd[0], POLLIN, 0}, {err.fd[0], POLLIN, 0}};
        const int pr = ::poll(fds, 2, static_cast<int>(std::min<long long>(left, 1000)));
        if (pr < 0 && errno == EINTR) continue;
        if (pr < 0) break;
        for (int k = 0; k < 2; ++k) {
            if (fds[k].fd < 0 || !(fds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            const ssize_t r = ::read(fds[k].fd, buf, sizeof buf);
            if (r > 0) {
                (k == 0 ? stdout_text : stderr_text).append(buf, static_cast<std::size_t>(r));
            } else if (r == 0 || errno != EINTR) {
                (k == 0 ? out : err).close_end(0);
            }
        }
    }
    if (timed_out) ::kill(pid, SIGKILL);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }

    if (timed_out) return EvalOutcome::failure("timed out after " + std::to_string(spec.timeout_seconds) + " s");
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        std::string why = WIFEXITED(status) ? "exit status " + std::to_string(WEXITSTATUS(status))
                                            : "killed by signal " + std::to_string(WTERMSIG(status));
        if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && stdout_text.empty()) why += " (command not found?)";
        if (!stderr_text.empty()) why += ": " + stderr_text.substr(0, 200);
        return EvalOutcome::failure(why);
    }
    const auto value = parse_objective_output(stdout_text);
    if (!value) return EvalOutcome::failure("last stdout line is not a finite number");
    return EvalOutcome::success(*value);
}

/// Evaluator adapter; FailurePolicy::abort turns failures into ObjectiveError.
inline Evaluator external_evaluator(ExternalObjectiveSpec spec) {
    spec.validate();
    return [spec = std::move(spec)](const TrialRequest& req) {
        EvalOutcome out = evaluate_external(spec, *req.config, req.trial);
        if (!out.ok && spec.failure_policy == FailurePolicy::abort) {
            throw ObjectiveError("trial " + std::to_string(req.trial) + ": " + out.error);
        }
        return out;
    };
}

}  // namespace sequd
