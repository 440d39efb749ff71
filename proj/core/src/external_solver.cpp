#include "geosat/external_solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "text_scan.hpp"

namespace geosat {

namespace {

std::string substitute(std::string arg, std::string_view placeholder, const std::string& value)
{
    for (auto pos = arg.find(placeholder); pos != std::string::npos;
         pos = arg.find(placeholder, pos + value.size())) {
        arg.replace(pos, placeholder.size(), value);
    }
    return arg;
}

// Unique scratch file for the child's stdout; removed on destruction.
class CaptureFile {
public:
    CaptureFile()
    {
        auto pattern = (std::filesystem::temp_directory_path() / "geosat-out-XXXXXX").string();
        fd_ = ::mkstemp(pattern.data());
        if (fd_ < 0) {
            throw std::runtime_error("cannot create a capture file for solver output");
        }
        path_ = pattern;
    }
    CaptureFile(const CaptureFile&) = delete;
    CaptureFile& operator=(const CaptureFile&) = delete;
    ~CaptureFile()
    {
        ::close(fd_);
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }

    [[nodiscard]] int fd() const noexcept { return fd_; }
    [[nodiscard]] std::string contents() const
    {
        std::ifstream in{path_, std::ios::binary};
        return detail::slurp(in);
    }

private:
    int fd_ = -1;
    std::filesystem::path path_;
};

std::optional<RunVerdict> status_line(std::string_view output)
{
    detail::LineReader lines{output};
    std::optional<RunVerdict> verdict;
    while (auto line = lines.next()) {
        const auto t = detail::trim(*line);
        if (t == "s SATISFIABLE") {
            verdict = RunVerdict::sat;
        } else if (t == "s UNSATISFIABLE") {
            verdict = RunVerdict::unsat;
        }
    }
    return verdict;
}

} // namespace

ExternalRun run_external_solver(const ExternalSolverSpec& solver,
                                const std::filesystem::path& instance_file,
                                const std::optional<std::filesystem::path>& proof_file,
                                std::chrono::duration<double> timeout)
{
    ExternalRun run;
    if (::access(solver.executable.c_str(), X_OK) != 0) {
        run.reason = fmt::format("solver executable {} not found or not executable",
                                 solver.executable.string());
        return run;
    }

    std::vector<std::string> args{solver.executable.string()};
    for (const auto& arg : solver.arguments) {
        if (arg.find("{proof}") != std::string::npos) {
            if (!proof_file) {
                continue;
            }
            args.push_back(substitute(arg, "{proof}", proof_file->string()));
        } else {
            args.push_back(substitute(arg, "{instance}", instance_file.string()));
        }
    }
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    argv.push_back(nullptr);

    CaptureFile capture;
    const int devnull = ::open("/dev/null", O_RDWR | O_CLOEXEC);

    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) {
        if (devnull >= 0) {
            ::close(devnull);
        }
        run.reason = "fork failed";
        return run;
    }
    if (pid == 0) {
        // Child: only async-signal-safe calls until exec.
        ::setpgid(0, 0);
        ::dup2(capture.fd(), STDOUT_FILENO);
        if (devnull >= 0) {
            ::dup2(devnull, STDIN_FILENO);
            ::dup2(devnull, STDERR_FILENO);
        }
        ::execv(argv[0], argv.data());
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    if (devnull >= 0) {
        ::close(devnull);
    }

    const auto deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(timeout);
    int status = 0;
    bool killed = false;
    auto pause = std::chrono::microseconds{100};
    for (;;) {
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            break;
        }
        if (done < 0 && errno != EINTR) {
            run.reason = "waitpid failed";
            return run;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
            }
            killed = true;
            break;
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::microseconds{5000});
    }
    run.wall_time = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    // Reap anything the solver left behind in its group.
    ::kill(-pid, SIGKILL);

    if (killed) {
        run.verdict = RunVerdict::timeout;
        return run;
    }
    if (WIFSIGNALED(status)) {
        run.reason = fmt::format("solver terminated by signal {}", WTERMSIG(status));
        return run;
    }
    run.exit_code = WEXITSTATUS(status);
    const auto announced = status_line(capture.contents());

    std::optional<RunVerdict> by_code;
    if (*run.exit_code == 10) {
        by_code = RunVerdict::sat;
    } else if (*run.exit_code == 20) {
        by_code = RunVerdict::unsat;
    }
    if (by_code && announced && *by_code != *announced) {
        run.reason = "exit code and status line disagree";
        return run;
    }
    if (!by_code && !announced) {
        run.reason = *run.exit_code == 127
                         ? std::string{"solver could not be executed"}
                         : fmt::format("no verdict (exit code {})", *run.exit_code);
        return run;
    }
    run.verdict = by_code ? *by_code : *announced;

    if (run.verdict == RunVerdict::unsat && proof_file && std::filesystem::exists(*proof_file)) {
        try {
            run.proof = read_drat_file(*proof_file);
        } catch (const std::exception& e) {
            run.reason = fmt::format("unreadable proof: {}", e.what());
        }
    }
    return run;
}

} // namespace geosat
