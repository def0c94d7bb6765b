#include "lspgen/lsp/process.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "lspgen/lsp/protocol_error.hpp"

namespace lspgen::lsp {

Process::~Process() {
    close_fds();
    if (pid_ > 0 && !exited_) {
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, nullptr, 0);
    }
}

Process::Process(Process&& other) noexcept { *this = std::move(other); }

Process& Process::operator=(Process&& other) noexcept {
    if (this != &other) {
        close_fds();
        pid_ = other.pid_;
        stdin_fd_ = other.stdin_fd_;
        stdout_fd_ = other.stdout_fd_;
        exited_ = other.exited_;
        exit_status_ = other.exit_status_;
        other.pid_ = -1;
        other.stdin_fd_ = -1;
        other.stdout_fd_ = -1;
        other.exited_ = true;
    }
    return *this;
}

void Process::close_fds() {
    if (stdin_fd_ >= 0) ::close(stdin_fd_);
    if (stdout_fd_ >= 0) ::close(stdout_fd_);
    stdin_fd_ = -1;
    stdout_fd_ = -1;
}

Process Process::spawn(const std::vector<std::string>& argv) {
    if (argv.empty()) throw SpawnError("empty launch command");

    int to_child[2];   // parent writes -> child stdin
    int from_child[2]; // child stdout -> parent reads
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
        throw SpawnError(std::string("pipe: ") + std::strerror(errno));
    }
    // The exec status pipe tells the parent whether execvp succeeded.
    int exec_status[2];
    if (::pipe(exec_status) != 0) {
        throw SpawnError(std::string("pipe: ") + std::strerror(errno));
    }
    ::fcntl(exec_status[1], F_SETFD, FD_CLOEXEC);

    const pid_t pid = ::fork();
    if (pid < 0) throw SpawnError(std::string("fork: ") + std::strerror(errno));

    if (pid == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::close(exec_status[0]);

        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        ::execvp(args[0], args.data());

        const int err = errno;
        (void)!::write(exec_status[1], &err, sizeof(err));
        ::_exit(127);
    }

    ::close(to_child[0]);
    ::close(from_child[1]);
    ::close(exec_status[1]);

    int child_errno = 0;
    const ssize_t n = ::read(exec_status[0], &child_errno, sizeof(child_errno));
    ::close(exec_status[0]);
    if (n > 0) {
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::waitpid(pid, nullptr, 0);
        throw SpawnError("cannot launch '" + argv[0] + "': " + std::strerror(child_errno));
    }

    Process p;
    p.pid_ = pid;
    p.stdin_fd_ = to_child[1];
    p.stdout_fd_ = from_child[0];
    return p;
}

bool Process::write_all(const std::string& data) {
    if (stdin_fd_ < 0) return false;
    std::size_t written = 0;
    while (written < data.size()) {
        const ssize_t n = ::write(stdin_fd_, data.data() + written, data.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        written += static_cast<std::size_t>(n);
    }
    return true;
}

std::string Process::read_some(std::size_t max) {
    if (stdout_fd_ < 0) return {};
    std::string buffer(max, '\0');
    for (;;) {
        const ssize_t n = ::read(stdout_fd_, buffer.data(), buffer.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            return {};
        }
        buffer.resize(static_cast<std::size_t>(n));
        return buffer;
    }
}

void Process::close_stdin() {
    if (stdin_fd_ >= 0) ::close(stdin_fd_);
    stdin_fd_ = -1;
}

std::optional<int> Process::wait_exit(std::chrono::milliseconds timeout) {
    if (pid_ <= 0) return exit_status_;
    if (exited_) return exit_status_;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        int status = 0;
        const pid_t r = ::waitpid(pid_, &status, WNOHANG);
        if (r == pid_) {
            exited_ = true;
            exit_status_ = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
            return exit_status_;
        }
        if (r < 0) {
            exited_ = true;
            return std::nullopt;
        }
        if (std::chrono::steady_clock::now() >= deadline) return std::nullopt;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
}

void Process::kill_now() {
    if (pid_ > 0 && !exited_) ::kill(pid_, SIGKILL);
}

}  // namespace lspgen::lsp
