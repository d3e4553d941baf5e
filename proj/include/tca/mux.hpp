// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tca/event_source.hpp"
#include "tca/term.hpp"

namespace tca {

class Runtime;

enum class MuxStatus {
    Stopped,      // stop() was called
    Shutdown,     // runtime shutdown observed
    Exhausted,    // every registered source is terminal; nothing can ever fire
    HandlerError, // a handler threw; see diagnostic
};

struct MuxResult {
    MuxStatus status;
    std::string diagnostic;
};

using Handler = std::function<void(const Message&)>;

// Per-process event loop over registered message sources.
//
// run() repeatedly waits until some source has a message, takes it, and
// dispatches the matching handler to completion; handlers within one mux
// never overlap. A message is taken from a source only when it is about
// to be dispatched, which preserves the channels' exactly-once delivery.
// Selection among ready sources rotates, so no perpetually ready source
// starves another.
//
// Handlers may perform blocking sends and receives on other channels or
// tools; deadlock avoidance is the application's concern. Registration
// precedes run(); a mux is confined to the process that runs it, but its
// sources may be fed from anywhere.
class Mux {
public:
    explicit Mux(Runtime& rt);
    ~Mux();
    Mux(const Mux&) = delete;
    Mux& operator=(const Mux&) = delete;

    // Rejects registration while running and duplicate source objects.
    void add(std::shared_ptr<EventSource> source, Handler handler);

    MuxResult run();

    // No further dispatches after the currently running handler returns.
    // Idempotent; callable from inside a handler or externally. Stopping
    // before run() makes run() return immediately.
    void stop();

private:
    struct Entry {
        std::shared_ptr<EventSource> source;
        Handler handler;
        std::uint64_t notifier_token;
    };

    Runtime& rt_;

    std::mutex mu_;
    std::condition_variable cv_;
    bool dirty_ = false;
    bool stopped_ = false;
    bool running_ = false;

    std::vector<Entry> entries_;
    std::size_t next_scan_ = 0;
    std::uint64_t waker_token_ = 0;
};

} // namespace tca
