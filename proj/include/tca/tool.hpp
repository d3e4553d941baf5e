// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <sys/types.h>

#include "tca/event_source.hpp"
#include "tca/term.hpp"

namespace tca {

class Runtime;

// Send/receive/kill surface of a managed tool. Coordination logic is
// written against this interface so tests can drive it with scripted
// fakes instead of child processes.
class ToolPort {
public:
    virtual ~ToolPort() = default;
    virtual const std::string& id() const noexcept = 0;
    virtual void send(const Message& m) = 0;
    virtual Message receive() = 0;
    virtual void kill() = 0;
    virtual std::shared_ptr<EventSource> source() = 0;
};

// One external tool as a child process: reads newline-terminated command
// lines on stdin, writes newline-terminated lines on stdout. Its stderr
// passes through to ours. A dedicated pump thread reads the child's
// output into a line queue serving receive() and the mux source.
//
// A handle is registered with its runtime from creation until kill (or
// until the child is known to have exited). Intended ownership is one
// coordinator process per tool, though this is not enforced.
class Tool final : public ToolPort {
public:
    enum class State { Created, Running, Killed, Exited };

    ~Tool() override;
    Tool(const Tool&) = delete;
    Tool& operator=(const Tool&) = delete;

    const std::string& id() const noexcept override { return id_; }

    // Spawns the child with stdin/stdout connected. Spawn failure names the
    // tool id and leaves the handle in state Exited.
    void start();

    // Frame-encodes m and flushes it to the child's stdin. A broken pipe
    // (child exited) is reported as ToolError and the state becomes Exited.
    void send(const Message& m) override;

    // Next line from the child's stdout; blocks. Throws ToolEof once the
    // child closed its output and the queue is drained (repeatable), and
    // ShutdownInterrupt when the runtime shuts down while blocked.
    Message receive() override;

    // Puts the child down and reaps it; idempotent, callable in any state.
    // A child that already closed its stdout gets a short grace to finish
    // exiting on its own so its exit status survives; anything still alive
    // after that (or that never closed stdout) is SIGKILLed.
    void kill() override;

    std::shared_ptr<EventSource> source() override;

    State state() const;
    pid_t pid() const;

    // Raw waitpid status once the child has been reaped.
    std::optional<int> wait_status() const;
    bool exited_cleanly() const; // reaped, WIFEXITED, status 0

private:
    friend class Runtime;
    friend class ToolSource;

    Tool(Runtime& rt, std::string id, std::string command, std::vector<std::string> args);

    void pump();
    void deliver_line(std::string line);
    bool eof_seen() const;
    bool reap(bool block);
    void mark_exited();

    EventSource::Take try_take(Message& out);
    std::uint64_t attach_notifier(std::function<void()> fn);
    void detach_notifier(std::uint64_t token);

    Runtime& rt_;
    std::string id_;
    std::string command_;
    std::vector<std::string> args_;

    mutable std::mutex state_mu_;
    State state_ = State::Created;
    pid_t pid_ = -1;
    std::optional<int> wait_status_;

    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::mutex write_mu_;
    std::thread pump_thread_;

    mutable std::mutex q_mu_;
    std::condition_variable q_cv_;
    std::deque<std::string> lines_;
    bool eof_ = false;
    std::vector<std::pair<std::uint64_t, std::function<void()>>> notifiers_;
    std::uint64_t next_notifier_ = 1;
    std::uint64_t waker_token_ = 0;
};

using ToolPtr = std::shared_ptr<Tool>;

} // namespace tca
