#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "xlang/errors.hpp"

// Child-process runner for compiler invocations. Captures stdout and stderr
// interleaved through one pipe and enforces a wall-clock deadline. The child
// gets its own process group so a timeout can kill the compiler and anything
// it spawned (JVM wrappers fork) in one signal.

namespace xlang::proc {

struct RunResult {
    int exitCode = -1;  // 128+signal when terminated by one
    bool timedOut = false;
    std::string output;
};

inline RunResult runProcess(const std::vector<std::string>& argv,
                            const std::map<std::string, std::string>& extraEnv,
                            double timeoutSeconds,
                            const std::filesystem::path& workingDir = {}) {
    if (argv.empty()) throw Error("runProcess: empty argv");

    int fds[2];
    if (::pipe(fds) != 0) throw Error("pipe() failed");

    pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw Error("fork() failed");
    }

    if (pid == 0) {
        ::setpgid(0, 0);
        if (!workingDir.empty() && ::chdir(workingDir.c_str()) != 0) _exit(126);
        ::dup2(fds[1], STDOUT_FILENO);
        ::dup2(fds[1], STDERR_FILENO);
        ::close(fds[0]);
        ::close(fds[1]);
        for (const auto& [k, v] : extraEnv) ::setenv(k.c_str(), v.c_str(), 1);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        ::execvp(cargv[0], cargv.data());
        _exit(127);
    }

    ::setpgid(pid, pid);  // also from the parent side: no startup race
    ::close(fds[1]);

    RunResult result;
    const auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::milliseconds(static_cast<long>(timeoutSeconds * 1000.0));

    char buf[4096];
    bool open = true;
    while (open) {
        auto now = std::chrono::steady_clock::now();
        long remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - now)
                             .count();
        if (remaining <= 0) {
            result.timedOut = true;
            ::kill(-pid, SIGKILL);
            break;
        }
        struct pollfd pfd{fds[0], POLLIN, 0};
        int rc = ::poll(&pfd, 1, static_cast<int>(remaining));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (rc == 0) continue;  // re-check deadline
        ssize_t n = ::read(fds[0], buf, sizeof buf);
        if (n > 0)
            result.output.append(buf, static_cast<std::size_t>(n));
        else
            open = false;
    }

    // After a kill, drain whatever made it into the pipe.
    if (result.timedOut) {
        ssize_t n;
        while ((n = ::read(fds[0], buf, sizeof buf)) > 0)
            result.output.append(buf, static_cast<std::size_t>(n));
    }
    ::close(fds[0]);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status))
        result.exitCode = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exitCode = 128 + WTERMSIG(status);
    return result;
}

}  // namespace xlang::proc
