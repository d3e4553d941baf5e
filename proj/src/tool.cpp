// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/tool.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstring>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "tca/errors.hpp"
#include "tca/runtime.hpp"

extern char** environ;

namespace tca {

namespace {

// Writes to a dead child's pipe must surface as EPIPE, not kill us.
void ignore_sigpipe_once() {
    static const int rc = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return 0;
    }();
    (void)rc;
}

const char* state_name(Tool::State s) {
    switch (s) {
    case Tool::State::Created: return "created";
    case Tool::State::Running: return "running";
    case Tool::State::Killed: return "killed";
    case Tool::State::Exited: return "exited";
    }
    return "?";
}

constexpr int kExitGraceMs = 2000;

} // namespace

class ToolSource final : public EventSource {
public:
    explicit ToolSource(Tool& t) : tool_(t) {}

    Take try_take(Message& out) override { return tool_.try_take(out); }

    std::uint64_t attach_notifier(std::function<void()> notify) override {
        return tool_.attach_notifier(std::move(notify));
    }

    void detach_notifier(std::uint64_t token) override {
        tool_.detach_notifier(token);
    }

private:
    Tool& tool_;
};

Tool::Tool(Runtime& rt, std::string id, std::string command, std::vector<std::string> args)
    : rt_(rt), id_(std::move(id)), command_(std::move(command)), args_(std::move(args)) {
    waker_token_ = rt_.add_waker([this] {
        std::lock_guard<std::mutex> lk(q_mu_);
        q_cv_.notify_all();
    });
}

Tool::~Tool() {
    // Safety net: never leave a live child or an unreaped zombie behind.
    pid_t pid = -1;
    bool reaped = false;
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        pid = pid_;
        reaped = wait_status_.has_value();
    }
    if (pid > 0 && !reaped) {
        ::kill(pid, SIGKILL);
        reap(true);
    }
    if (pump_thread_.joinable()) pump_thread_.join();
    if (stdin_fd_ >= 0) ::close(stdin_fd_);
    if (stdout_fd_ >= 0) ::close(stdout_fd_);
    rt_.remove_waker(waker_token_);
}

void Tool::start() {
    ignore_sigpipe_once();
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        if (state_ == State::Killed) throw ShutdownInterrupt{}; // killed before start
        if (state_ != State::Created)
            throw ToolError("tool " + id_ + ": start in state " + state_name(state_));
    }
    if (rt_.shutdown_requested()) throw ShutdownInterrupt{};

    int to_child[2];   // we write, child reads as stdin
    int from_child[2]; // child writes as stdout, we read
    if (::pipe2(to_child, O_CLOEXEC) != 0)
        throw ToolError("tool " + id_ + ": pipe: " + std::strerror(errno));
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
        int e = errno;
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw ToolError("tool " + id_ + ": pipe: " + std::strerror(e));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
    // stderr is inherited: tool diagnostics pass through.

    std::vector<char*> argv;
    argv.push_back(command_.data());
    for (auto& a : args_) argv.push_back(a.data());
    argv.push_back(nullptr);

    pid_t pid = -1;
    int rc = ::posix_spawnp(&pid, command_.c_str(), &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);

    if (rc != 0) {
        ::close(to_child[1]);
        ::close(from_child[0]);
        {
            std::lock_guard<std::mutex> lk(state_mu_);
            if (state_ == State::Created) state_ = State::Exited;
        }
        rt_.deregister_tool(this);
        throw ToolError("tool " + id_ + ": cannot start '" + command_ +
                        "': " + std::strerror(rc));
    }

    bool raced_with_kill = false;
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        pid_ = pid;
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
        if (state_ == State::Killed) {
            // The registry kill pass ran between our entry check and the
            // spawn; the real child is ours to put down.
            raced_with_kill = true;
        } else {
            state_ = State::Running;
        }
    }
    rt_.note_spawn(pid);
    if (raced_with_kill) {
        ::kill(pid, SIGKILL);
        reap(true);
        throw ShutdownInterrupt{};
    }

    pump_thread_ = std::thread([this] { pump(); });

    if (rt_.shutdown_requested()) {
        kill();
        throw ShutdownInterrupt{};
    }
}

void Tool::send(const Message& m) {
    require_valid_message(m);
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        if (state_ != State::Running) {
            // A tool put down by the shutdown's kill pass is cancellation,
            // not a caller mistake.
            if (rt_.shutdown_requested()) throw ShutdownInterrupt{};
            throw ToolError("tool " + id_ + ": send in state " + state_name(state_));
        }
    }
    const std::string frame = frame_encode(m);
    {
        std::lock_guard<std::mutex> lk(write_mu_);
        const char* p = frame.data();
        std::size_t left = frame.size();
        while (left > 0) {
            ssize_t n = ::write(stdin_fd_, p, left);
            if (n < 0) {
                if (errno == EINTR) continue;
                const bool gone = (errno == EPIPE);
                mark_exited();
                if (rt_.shutdown_requested()) throw ShutdownInterrupt{};
                throw ToolError("tool " + id_ + ": " +
                                (gone ? std::string("broken pipe (tool exited)")
                                      : std::string("write: ") + std::strerror(errno)));
            }
            p += n;
            left -= static_cast<std::size_t>(n);
        }
    }
    rt_.trace(TraceEvent::tool_send(id_, m));
}

Message Tool::receive() {
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        if (state_ == State::Created)
            throw ToolError("tool " + id_ + ": receive before start");
    }
    std::unique_lock<std::mutex> lk(q_mu_);
    q_cv_.wait(lk, [&] { return !lines_.empty() || eof_ || rt_.shutdown_requested(); });
    if (!lines_.empty()) {
        Message m = std::move(lines_.front());
        lines_.pop_front();
        return m;
    }
    // Shutdown takes precedence over eof: an eof produced by the shutdown's
    // own kill pass is cancellation, not tool death to be reported.
    if (rt_.shutdown_requested()) throw ShutdownInterrupt{};
    throw ToolEof(id_);
}

void Tool::kill() {
    State prev;
    pid_t pid;
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        if (state_ == State::Killed) return; // repeat kill is a no-op
        prev = state_;
        state_ = State::Killed;
        pid = pid_;
    }
    rt_.deregister_tool(this);
    rt_.trace(TraceEvent::tool_kill(id_));
    if (prev != State::Running || pid < 0) return;

    // Already dead on its own: reap and keep its exit status (killing an
    // already-dead tool is a no-op).
    if (reap(false)) return;
    if (eof_seen()) {
        // Output closed: the child is on its way out. Let it finish so its
        // exit status survives, bounded in case it is wedged.
        for (int i = 0; i < kExitGraceMs; ++i) {
            if (reap(false)) return;
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }
    }
    ::kill(pid, SIGKILL);
    reap(true);
}

std::shared_ptr<EventSource> Tool::source() {
    return std::make_shared<ToolSource>(*this);
}

Tool::State Tool::state() const {
    std::lock_guard<std::mutex> lk(state_mu_);
    return state_;
}

pid_t Tool::pid() const {
    std::lock_guard<std::mutex> lk(state_mu_);
    return pid_;
}

std::optional<int> Tool::wait_status() const {
    std::lock_guard<std::mutex> lk(state_mu_);
    return wait_status_;
}

bool Tool::exited_cleanly() const {
    auto st = wait_status();
    return st && WIFEXITED(*st) && WEXITSTATUS(*st) == 0;
}

void Tool::pump() {
    LineDecoder dec;
    char buf[4096];
    for (;;) {
        ssize_t n = ::read(stdout_fd_, buf, sizeof buf);
        if (n > 0) {
            dec.feed(buf, static_cast<std::size_t>(n));
            while (auto line = dec.next()) deliver_line(std::move(*line));
        } else if (n == 0) {
            break;
        } else if (errno == EINTR) {
            continue;
        } else {
            break;
        }
    }
    if (auto tail = dec.finish(); tail && !tail->empty())
        std::fprintf(stderr, "tca: tool %s: discarding unterminated output fragment (%zu bytes)\n",
                     id_.c_str(), tail->size());
    std::lock_guard<std::mutex> lk(q_mu_);
    eof_ = true;
    q_cv_.notify_all();
    for (auto& [token, notify] : notifiers_) notify();
}

void Tool::deliver_line(std::string line) {
    rt_.trace(TraceEvent::tool_receive(id_, line));
    std::lock_guard<std::mutex> lk(q_mu_);
    lines_.push_back(std::move(line));
    q_cv_.notify_all();
    for (auto& [token, notify] : notifiers_) notify();
}

bool Tool::eof_seen() const {
    std::lock_guard<std::mutex> lk(q_mu_);
    return eof_;
}

bool Tool::reap(bool block) {
    pid_t pid;
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        if (wait_status_.has_value()) return true;
        pid = pid_;
    }
    if (pid <= 0) return false;
    int st = 0;
    pid_t r = ::waitpid(pid, &st, block ? 0 : WNOHANG);
    if (r == pid) {
        std::lock_guard<std::mutex> lk(state_mu_);
        wait_status_ = st;
        return true;
    }
    return false;
}

void Tool::mark_exited() {
    {
        std::lock_guard<std::mutex> lk(state_mu_);
        if (state_ != State::Running) return;
        state_ = State::Exited;
    }
    rt_.deregister_tool(this);
    reap(false);
}

EventSource::Take Tool::try_take(Message& out) {
    std::lock_guard<std::mutex> lk(q_mu_);
    if (!lines_.empty()) {
        out = std::move(lines_.front());
        lines_.pop_front();
        return EventSource::Take::Ready;
    }
    return eof_ ? EventSource::Take::Terminal : EventSource::Take::Empty;
}

std::uint64_t Tool::attach_notifier(std::function<void()> fn) {
    std::lock_guard<std::mutex> lk(q_mu_);
    auto token = next_notifier_++;
    notifiers_.emplace_back(token, std::move(fn));
    return token;
}

void Tool::detach_notifier(std::uint64_t token) {
    std::lock_guard<std::mutex> lk(q_mu_);
    notifiers_.erase(std::remove_if(notifiers_.begin(), notifiers_.end(),
                                    [token](const auto& p) { return p.first == token; }),
                     notifiers_.end());
}

} // namespace tca
