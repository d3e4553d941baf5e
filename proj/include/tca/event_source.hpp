// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include "tca/term.hpp"

namespace tca {

// A registrable message source for the per-process mux.
//
// try_take must only hand out a message the caller is committed to
// dispatching: on a rendezvous channel, taking completes the sender's
// rendezvous, so a taken message may never be dropped.
class EventSource {
public:
    enum class Take {
        Ready,    // out was filled with one message
        Empty,    // nothing available right now
        Terminal, // the source will never produce another message
    };

    virtual ~EventSource() = default;

    virtual Take try_take(Message& out) = 0;

    // The notifier fires whenever the source may have become ready or
    // terminal. It is invoked with source-internal locks held, so it must
    // not call back into the source.
    virtual std::uint64_t attach_notifier(std::function<void()> notify) = 0;
    virtual void detach_notifier(std::uint64_t token) = 0;
};

} // namespace tca
