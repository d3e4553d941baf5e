// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/runtime.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <thread>

#include "tca/errors.hpp"
#include "tca/tool.hpp"

namespace tca {

Runtime::Runtime() : sink_(&std::cout) {}

Runtime::~Runtime() {
    // Safety net for tools never killed through shutdown.
    auto leftovers = live_tools();
    for (auto& t : leftovers) t->kill();
}

void Runtime::set_trace_sink(std::ostream* sink) {
    std::lock_guard<std::mutex> lk(trace_mu_);
    sink_ = sink;
}

void Runtime::trace(const TraceEvent& ev) {
    if (!debug()) return;
    std::lock_guard<std::mutex> lk(trace_mu_);
    if (!sink_) return;
    *sink_ << ev.render() << '\n';
    sink_->flush();
}

void Runtime::debug_note(const std::string& note) {
    if (!debug()) return;
    std::fprintf(stderr, "tca: %s\n", note.c_str());
}

RunResult Runtime::run(std::vector<ProcessFn> procs) {
    if (procs.empty())
        throw std::invalid_argument("runtime: run() needs at least one process function");
    if (ran_.exchange(true))
        throw std::logic_error("runtime: run() may be invoked once per instance");

    std::vector<std::thread> threads;
    threads.reserve(procs.size());
    for (std::size_t i = 0; i < procs.size(); ++i) {
        threads.emplace_back([this, fn = std::move(procs[i]), i] {
            try {
                fn();
            } catch (const ShutdownInterrupt&) {
                // normal cancellation
            } catch (const std::exception& e) {
                cancel("process " + std::to_string(i) + ": " + e.what(), true);
            } catch (...) {
                cancel("process " + std::to_string(i) + ": unknown failure", true);
            }
        });
    }
    for (auto& t : threads) t.join();

    RunResult result;
    {
        std::lock_guard<std::mutex> lk(diag_mu_);
        result.diagnostics = diagnostics_;
        if (aborted_) {
            result.status = RunStatus::Aborted;
            return result;
        }
    }
    result.status = shutdown_requested() ? RunStatus::Shutdown : RunStatus::Completed;
    return result;
}

void Runtime::shutdown() {
    cancel("", false);
}

void Runtime::cancel(const std::string& diagnostic, bool as_abort) {
    if (as_abort) {
        std::lock_guard<std::mutex> lk(diag_mu_);
        aborted_ = true;
        if (!diagnostic.empty()) diagnostics_.push_back(diagnostic);
    }

    if (cancelled_.exchange(true, std::memory_order_acq_rel))
        return; // cleanup already ran (double shutdown is a no-op)

    // Kill pass over a snapshot; tools registered concurrently kill
    // themselves on registration once the flag is up.
    std::vector<std::shared_ptr<Tool>> snapshot;
    {
        std::lock_guard<std::mutex> lk(reg_mu_);
        snapshot = tools_;
    }
    for (auto& t : snapshot) t->kill();

    // Wake every blocked channel/tool/mux wait so it observes the flag.
    std::lock_guard<std::mutex> lk(reg_mu_);
    for (auto& [token, wake] : wakers_) wake();
}

std::shared_ptr<Tool> Runtime::make_tool(std::string id, std::string command,
                                         std::vector<std::string> args) {
    std::shared_ptr<Tool> t(new Tool(*this, std::move(id), std::move(command), std::move(args)));
    {
        std::lock_guard<std::mutex> lk(reg_mu_);
        tools_.push_back(t);
    }
    // A shutdown that raced the registration may have missed this tool.
    if (shutdown_requested()) t->kill();
    return t;
}

std::vector<std::shared_ptr<Tool>> Runtime::live_tools() const {
    std::lock_guard<std::mutex> lk(reg_mu_);
    return tools_;
}

std::vector<pid_t> Runtime::spawned_pids() const {
    std::lock_guard<std::mutex> lk(reg_mu_);
    return spawned_;
}

std::uint64_t Runtime::add_waker(std::function<void()> wake) {
    std::lock_guard<std::mutex> lk(reg_mu_);
    auto token = next_waker_++;
    wakers_.emplace(token, std::move(wake));
    return token;
}

void Runtime::remove_waker(std::uint64_t token) {
    std::lock_guard<std::mutex> lk(reg_mu_);
    wakers_.erase(token);
}

void Runtime::deregister_tool(const Tool* t) {
    std::lock_guard<std::mutex> lk(reg_mu_);
    tools_.erase(std::remove_if(tools_.begin(), tools_.end(),
                                [t](const std::shared_ptr<Tool>& p) { return p.get() == t; }),
                 tools_.end());
}

void Runtime::note_spawn(pid_t pid) {
    std::lock_guard<std::mutex> lk(reg_mu_);
    spawned_.push_back(pid);
}

} // namespace tca
