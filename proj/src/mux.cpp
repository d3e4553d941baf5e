// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/mux.hpp"

#include <exception>
#include <stdexcept>

#include "tca/errors.hpp"
#include "tca/runtime.hpp"

namespace tca {

Mux::Mux(Runtime& rt) : rt_(rt) {
    waker_token_ = rt_.add_waker([this] {
        std::lock_guard<std::mutex> lk(mu_);
        cv_.notify_all();
    });
}

Mux::~Mux() {
    for (auto& e : entries_) e.source->detach_notifier(e.notifier_token);
    rt_.remove_waker(waker_token_);
}

void Mux::add(std::shared_ptr<EventSource> source, Handler handler) {
    if (!source) throw std::invalid_argument("mux: null source");
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (running_) throw std::logic_error("mux: cannot add a source while running");
        for (const auto& e : entries_)
            if (e.source == source)
                throw std::logic_error("mux: source already registered");
    }
    // Attach outside our lock; the notifier locks mu_ when it fires.
    auto token = source->attach_notifier([this] {
        std::lock_guard<std::mutex> lk(mu_);
        dirty_ = true;
        cv_.notify_all();
    });
    std::lock_guard<std::mutex> lk(mu_);
    entries_.push_back({std::move(source), std::move(handler), token});
}

MuxResult Mux::run() {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (running_) throw std::logic_error("mux: already running");
        running_ = true;
    }

    auto finish = [this](MuxResult r) {
        std::lock_guard<std::mutex> lk(mu_);
        running_ = false;
        return r;
    };

    for (;;) {
        if (rt_.shutdown_requested()) return finish({MuxStatus::Shutdown, {}});
        {
            std::lock_guard<std::mutex> lk(mu_);
            if (stopped_) {
                running_ = false;
                return {MuxStatus::Stopped, {}};
            }
            // Readiness signalled during the scan below re-raises this flag.
            dirty_ = false;
        }

        bool dispatched = false;
        std::size_t terminal = 0;
        const std::size_t n = entries_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = (next_scan_ + i) % n;
            Message msg;
            switch (entries_[idx].source->try_take(msg)) {
            case EventSource::Take::Ready: {
                next_scan_ = idx + 1; // rotate for starvation-freedom
                try {
                    entries_[idx].handler(msg);
                } catch (const ShutdownInterrupt&) {
                    return finish({MuxStatus::Shutdown, {}});
                } catch (const std::exception& e) {
                    // Cancellation wins over failures it may itself have
                    // provoked (killed tools under a handler's feet).
                    if (rt_.shutdown_requested()) return finish({MuxStatus::Shutdown, {}});
                    return finish({MuxStatus::HandlerError, e.what()});
                } catch (...) {
                    if (rt_.shutdown_requested()) return finish({MuxStatus::Shutdown, {}});
                    return finish({MuxStatus::HandlerError, "unknown handler failure"});
                }
                dispatched = true;
                break;
            }
            case EventSource::Take::Terminal:
                ++terminal;
                break;
            case EventSource::Take::Empty:
                break;
            }
            if (dispatched) break;
        }

        if (dispatched) {
            std::lock_guard<std::mutex> lk(mu_);
            if (stopped_) {
                running_ = false;
                return {MuxStatus::Stopped, {}};
            }
            continue;
        }

        if (n > 0 && terminal == n)
            return finish({rt_.shutdown_requested() ? MuxStatus::Shutdown : MuxStatus::Exhausted,
                           {}});

        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] { return dirty_ || stopped_ || rt_.shutdown_requested(); });
    }
}

void Mux::stop() {
    std::lock_guard<std::mutex> lk(mu_);
    stopped_ = true;
    cv_.notify_all();
}

} // namespace tca
