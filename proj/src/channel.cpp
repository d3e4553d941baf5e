// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/channel.hpp"

#include <algorithm>

#include "tca/errors.hpp"
#include "tca/runtime.hpp"

namespace tca {

class ChannelSource final : public EventSource {
public:
    explicit ChannelSource(Channel& ch) : ch_(ch) {}

    Take try_take(Message& out) override {
        // Channels never terminate; shutdown is observed by the mux itself.
        return ch_.try_take(out) ? Take::Ready : Take::Empty;
    }

    std::uint64_t attach_notifier(std::function<void()> notify) override {
        return ch_.attach_notifier(std::move(notify));
    }

    void detach_notifier(std::uint64_t token) override {
        ch_.detach_notifier(token);
    }

private:
    Channel& ch_;
};

Channel::Channel(Runtime& rt, std::string id) : rt_(rt), id_(std::move(id)) {
    waker_token_ = rt_.add_waker([this] {
        std::lock_guard<std::mutex> lk(mu_);
        cv_.notify_all();
    });
}

Channel::~Channel() {
    rt_.remove_waker(waker_token_);
}

void Channel::send(const Message& m) {
    require_valid_message(m);
    rt_.trace(TraceEvent::chan_send(id_, m)); // before blocking

    SendEntry entry{&m};
    std::unique_lock<std::mutex> lk(mu_);
    waiting_.push_back(&entry);
    cv_.notify_all();
    for (auto& [token, notify] : notifiers_) notify();

    cv_.wait(lk, [&] { return entry.taken || rt_.shutdown_requested(); });
    if (entry.taken) return;

    // Shutdown won the race: withdraw the offer so nobody takes it later.
    waiting_.erase(std::remove(waiting_.begin(), waiting_.end(), &entry), waiting_.end());
    throw ShutdownInterrupt{};
}

Message Channel::receive() {
    std::unique_lock<std::mutex> lk(mu_);
    cv_.wait(lk, [&] { return !waiting_.empty() || rt_.shutdown_requested(); });
    if (rt_.shutdown_requested() && waiting_.empty()) throw ShutdownInterrupt{};

    SendEntry* entry = waiting_.front();
    waiting_.pop_front();
    Message m = *entry->msg;
    entry->taken = true;
    cv_.notify_all();
    return m;
}

bool Channel::try_take(Message& out) {
    std::lock_guard<std::mutex> lk(mu_);
    if (waiting_.empty()) return false;
    SendEntry* entry = waiting_.front();
    waiting_.pop_front();
    out = *entry->msg;
    entry->taken = true;
    cv_.notify_all();
    return true;
}

std::shared_ptr<EventSource> Channel::source() {
    return std::make_shared<ChannelSource>(*this);
}

std::uint64_t Channel::attach_notifier(std::function<void()> fn) {
    std::lock_guard<std::mutex> lk(mu_);
    auto token = next_notifier_++;
    notifiers_.emplace_back(token, std::move(fn));
    return token;
}

void Channel::detach_notifier(std::uint64_t token) {
    std::lock_guard<std::mutex> lk(mu_);
    notifiers_.erase(std::remove_if(notifiers_.begin(), notifiers_.end(),
                                    [token](const auto& p) { return p.first == token; }),
                     notifiers_.end());
}

} // namespace tca
