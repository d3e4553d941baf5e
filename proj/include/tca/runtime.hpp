// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <sys/types.h>

#include "tca/trace.hpp"

namespace tca {

class Tool;

enum class RunStatus {
    Completed, // every process function returned
    Shutdown,  // shutdown() was invoked
    Aborted,   // a process function failed; see diagnostics
};

struct RunResult {
    RunStatus status = RunStatus::Completed;
    std::vector<std::string> diagnostics;
};

using ProcessFn = std::function<void()>;

// Top-level lifecycle: runs coordinator processes concurrently, keeps the
// registry of live tools, owns the debug switch and its trace sink, and
// provides global shutdown.
//
// This is the library-mode runtime: shutdown() cancels the processes and
// run() returns RunStatus::Shutdown, so many runs can share one OS process.
// The CLI wraps a run and exits 0 on Shutdown/Completed. Channels, tools
// and muxes hold a reference to their runtime and must not outlive it.
class Runtime {
public:
    Runtime();
    ~Runtime();
    Runtime(const Runtime&) = delete;
    Runtime& operator=(const Runtime&) = delete;

    // Debug switch and trace sink. Trace lines are written atomically per
    // line; the sink is not owned. Passing nullptr silences tracing.
    void set_debug(bool on) noexcept { debug_.store(on, std::memory_order_relaxed); }
    bool debug() const noexcept { return debug_.load(std::memory_order_relaxed); }
    void set_trace_sink(std::ostream* sink);
    void trace(const TraceEvent& ev);

    // Debug-mode-only human diagnostic; goes to stderr, never the trace sink.
    void debug_note(const std::string& note);

    // Starts every process function concurrently and returns once all have
    // returned (Completed), shutdown was invoked (Shutdown), or a process
    // failed (Aborted, after best-effort tool cleanup). May be called once.
    RunResult run(std::vector<ProcessFn> procs);

    // Kills every registered tool and interrupts all blocked channel, tool
    // and mux operations. Callable from any process, any number of times.
    void shutdown();
    bool shutdown_requested() const noexcept {
        return cancelled_.load(std::memory_order_acquire);
    }

    // Creates a tool handle in state Created and registers it. The child
    // process is spawned by Tool::start().
    std::shared_ptr<Tool> make_tool(std::string id, std::string command,
                                    std::vector<std::string> args = {});

    std::vector<std::shared_ptr<Tool>> live_tools() const;

    // Every child pid this runtime ever spawned, for liveness checks.
    std::vector<pid_t> spawned_pids() const;

    // --- wiring used by Channel / Tool / Mux ---------------------------

    // Wakers are invoked by shutdown so blocked waits can re-check the
    // cancel flag. A waker locks its own mutex and notifies; it must not
    // call back into the runtime.
    std::uint64_t add_waker(std::function<void()> wake);
    void remove_waker(std::uint64_t token);

    void deregister_tool(const Tool* t);
    void note_spawn(pid_t pid);

private:
    void cancel(const std::string& diagnostic, bool as_abort);

    std::atomic<bool> debug_{false};
    std::atomic<bool> cancelled_{false};
    std::atomic<bool> ran_{false};

    std::mutex trace_mu_;
    std::ostream* sink_;

    mutable std::mutex reg_mu_;
    std::map<std::uint64_t, std::function<void()>> wakers_;
    std::uint64_t next_waker_ = 1;
    std::vector<std::shared_ptr<Tool>> tools_;
    std::vector<pid_t> spawned_;

    std::mutex diag_mu_;
    bool aborted_ = false;
    std::vector<std::string> diagnostics_;
};

} // namespace tca
