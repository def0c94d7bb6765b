#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace lspgen::lsp {

/// A child process with piped stdin/stdout (stderr is inherited).
class Process {
public:
    Process() = default;
    ~Process();

    Process(const Process&) = delete;
    Process& operator=(const Process&) = delete;
    Process(Process&& other) noexcept;
    Process& operator=(Process&& other) noexcept;

    /// Spawns `argv[0]` with the given arguments. Throws SpawnError when the
    /// executable cannot be started.
    static Process spawn(const std::vector<std::string>& argv);

    bool running() const { return pid_ > 0 && !exited_; }
    int pid() const { return pid_; }

    /// Writes the whole buffer to the child's stdin. Returns false once the
    /// pipe is broken (child gone).
    bool write_all(const std::string& data);

    /// Blocking read of up to `max` bytes from the child's stdout. Empty
    /// result means EOF.
    std::string read_some(std::size_t max = 65536);

    void close_stdin();

    /// Waits up to `timeout` for exit; returns the exit status if reaped.
    std::optional<int> wait_exit(std::chrono::milliseconds timeout);

    void kill_now();

private:
    int pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    bool exited_ = false;
    int exit_status_ = -1;

    void close_fds();
};

}  // namespace lspgen::lsp
