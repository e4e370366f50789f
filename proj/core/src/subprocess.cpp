#include "streamllm/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <set>

#include "streamllm/errors.hpp"

namespace streamllm {

namespace {

std::mutex g_children_mutex;
std::set<pid_t> g_children;

void register_child(pid_t pid) {
    std::lock_guard<std::mutex> lock(g_children_mutex);
    g_children.insert(pid);
}

void unregister_child(pid_t pid) {
    std::lock_guard<std::mutex> lock(g_children_mutex);
    g_children.erase(pid);
}

void set_cloexec(int fd) {
    int flags = fcntl(fd, F_GETFD);
    fcntl(fd, F_SETFD, flags | FD_CLOEXEC);
}

// Drains whatever is available on fd into out; returns false on EOF.
bool drain(int fd, std::string& out) {
    char buf[4096];
    for (;;) {
        ssize_t n = read(fd, buf, sizeof(buf));
        if (n > 0) {
            out.append(buf, static_cast<std::size_t>(n));
            continue;
        }
        if (n == 0) return false;
        if (errno == EAGAIN || errno == EWOULDBLOCK) return true;
        if (errno == EINTR) continue;
        return false;
    }
}

}  // namespace

int active_child_count() {
    std::lock_guard<std::mutex> lock(g_children_mutex);
    return static_cast<int>(g_children.size());
}

ProcessResult run_process(const std::vector<std::string>& argv,
                          double kill_after_seconds,
                          const CancelToken* cancel) {
    if (argv.empty()) throw EnvironmentError("empty argv");

    int out_pipe[2], err_pipe[2], exec_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0 || pipe(exec_pipe) != 0) {
        throw EnvironmentError(std::string("pipe: ") + std::strerror(errno));
    }
    set_cloexec(exec_pipe[1]);

    const auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) throw EnvironmentError(std::string("fork: ") + std::strerror(errno));

    if (pid == 0) {
        // Child: own process group so a kill reaches the backend solver too.
        setpgid(0, 0);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        close(exec_pipe[0]);

        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        int err = errno;
        (void)!write(exec_pipe[1], &err, sizeof(err));
        _exit(127);
    }

    setpgid(pid, pid);  // also from the parent side to close the race
    register_child(pid);
    close(out_pipe[1]);
    close(err_pipe[1]);
    close(exec_pipe[1]);

    // Exec failure is reported through the CLOEXEC pipe before any output.
    int exec_errno = 0;
    ssize_t n = read(exec_pipe[0], &exec_errno, sizeof(exec_errno));
    close(exec_pipe[0]);
    if (n == static_cast<ssize_t>(sizeof(exec_errno))) {
        close(out_pipe[0]);
        close(err_pipe[0]);
        waitpid(pid, nullptr, 0);
        unregister_child(pid);
        throw EnvironmentError("cannot run '" + argv[0] + "': " + std::strerror(exec_errno));
    }

    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    ProcessResult result;
    bool out_open = true, err_open = true;
    bool killed = false, was_cancelled = false;

    auto elapsed = [&start]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    for (;;) {
        if (!killed) {
            bool over_deadline = elapsed() >= kill_after_seconds;
            bool cancel_hit = cancel != nullptr && cancel->cancelled();
            if (over_deadline || cancel_hit) {
                killpg(pid, SIGKILL);
                killed = true;
                was_cancelled = cancel_hit && !over_deadline;
            }
        }

        struct pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};
        if (nfds == 0) break;

        int rc = poll(fds, nfds, 50);
        if (rc < 0 && errno != EINTR) break;
        for (nfds_t i = 0; i < nfds; ++i) {
            if (fds[i].revents == 0) continue;
            if (fds[i].fd == out_pipe[0]) {
                if (!drain(out_pipe[0], result.stdout_text)) out_open = false;
            } else {
                if (!drain(err_pipe[0], result.stderr_text)) err_open = false;
            }
        }
    }
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    // Reap any stragglers left in the group.
    killpg(pid, SIGKILL);
    unregister_child(pid);

    result.wall_seconds = elapsed();
    result.killed = killed;
    result.cancelled = was_cancelled;
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
        result.killed = result.killed || WTERMSIG(status) == SIGKILL;
    }
    return result;
}

}  // namespace streamllm
