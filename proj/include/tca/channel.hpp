// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "tca/event_source.hpp"
#include "tca/term.hpp"

namespace tca {

class Runtime;

// Named synchronous channel between coordinator processes.
//
// send() completes only once a receiver has taken the message; no message
// is ever stored past a sender's return, and each message is delivered to
// exactly one receiver. The id is a debug label with no semantics: two
// channels with equal ids are independent.
//
// All operations are safe to invoke concurrently from any process. Blocked
// sends and receives observe runtime shutdown as a ShutdownInterrupt.
class Channel {
public:
    Channel(Runtime& rt, std::string id);
    ~Channel();
    Channel(const Channel&) = delete;
    Channel& operator=(const Channel&) = delete;

    const std::string& id() const noexcept { return id_; }

    // Blocks until a receiver takes m. With debug on, emits the trace line
    // before blocking.
    void send(const Message& m);

    // Blocks until a paired send is available.
    Message receive();

    // A registrable source for the event mux. Each source call yields an
    // independent source object; a message goes to exactly one consumer,
    // whether a blocking receive or a mux.
    std::shared_ptr<EventSource> source();

private:
    friend class ChannelSource;

    struct SendEntry {
        const Message* msg;
        bool taken = false;
    };

    bool try_take(Message& out);
    std::uint64_t attach_notifier(std::function<void()> fn);
    void detach_notifier(std::uint64_t token);

    Runtime& rt_;
    std::string id_;

    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<SendEntry*> waiting_;
    std::vector<std::pair<std::uint64_t, std::function<void()>>> notifiers_;
    std::uint64_t next_notifier_ = 1;
    std::uint64_t waker_token_ = 0;
};

} // namespace tca
