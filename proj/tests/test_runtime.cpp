// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "tca/channel.hpp"
#include "tca/errors.hpp"
#include "tca/runtime.hpp"
#include "tca/tool.hpp"
#include "test_util.hpp"

using namespace tca;
using namespace tca::test;
using namespace std::chrono_literals;

TEST_CASE("run returns completed when every process returns") {
    Runtime rt;
    std::atomic<int> ran{0};
    auto r = rt.run({[&] { ++ran; }, [&] { ++ran; }});
    CHECK(r.status == RunStatus::Completed);
    CHECK(ran.load() == 2);
}

TEST_CASE("run waits for all processes") {
    Runtime rt;
    Channel ch(rt, "c");
    std::atomic<bool> returned{false};
    std::thread runner([&] {
        rt.run({[] {}, [&] {
                    try {
                        (void)ch.receive(); // blocks forever
                    } catch (const ShutdownInterrupt&) {
                    }
                }});
        returned = true;
    });
    std::this_thread::sleep_for(100ms);
    CHECK_FALSE(returned.load()); // still waiting on the blocked process
    rt.shutdown();
    runner.join();
}

TEST_CASE("run rejects an empty process list and a second invocation") {
    Runtime rt;
    CHECK_THROWS_AS(rt.run({}), std::invalid_argument);
    rt.run({[] {}});
    CHECK_THROWS_AS(rt.run({[] {}}), std::logic_error);
}

TEST_CASE("shutdown from a process makes run return shutdown") {
    Runtime rt;
    Channel ch(rt, "c");
    auto r = rt.run({
        [&] { rt.shutdown(); },
        [&] {
            try {
                (void)ch.receive();
            } catch (const ShutdownInterrupt&) {
            }
        },
    });
    CHECK(r.status == RunStatus::Shutdown);
}

TEST_CASE("a failing process aborts the run with a diagnostic") {
    Runtime rt;
    Channel ch(rt, "c");
    auto r = rt.run({
        [&] { throw std::runtime_error("exploded"); },
        [&] { (void)ch.receive(); }, // unblocked by the abort's cleanup
    });
    CHECK(r.status == RunStatus::Aborted);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].find("exploded") != std::string::npos);
}

TEST_CASE("concurrent double shutdown is idempotent") {
    Runtime rt;
    std::thread a([&] { rt.shutdown(); });
    std::thread b([&] { rt.shutdown(); });
    a.join();
    b.join();
    CHECK(rt.shutdown_requested());
}

TEST_CASE("trace events render the four canonical formats") {
    CHECK(TraceEvent::chan_send("12", "message").render() == "TCA chan snd 12 : message");
    CHECK(TraceEvent::tool_send("comp1", "quit").render() == "TCA comp1 send: quit");
    CHECK(TraceEvent::tool_receive("comp2", "snd-event(quit)").render() ==
          "TCA comp2 receive: snd-event(quit)");
    CHECK(TraceEvent::tool_kill("comp2").render() == "TCA tool comp2 killed");
}

TEST_CASE("debug off silences the sink; toggling takes effect per event") {
    Runtime rt;
    std::ostringstream sink;
    rt.set_trace_sink(&sink);

    rt.set_debug(false);
    rt.trace(TraceEvent::tool_send("t", "one"));
    CHECK(sink.str().empty());

    rt.set_debug(true);
    rt.trace(TraceEvent::tool_send("t", "two"));
    rt.set_debug(false);
    rt.trace(TraceEvent::tool_send("t", "three"));
    CHECK(sink.str() == "TCA t send: two\n");
}

TEST_CASE("trace completeness: one line per send, receive, kill, chan-send") {
    Runtime rt;
    std::ostringstream sink;
    rt.set_trace_sink(&sink);
    rt.set_debug(true);

    Channel ch(rt, "c");
    for (int i = 0; i < 5; ++i) {
        std::thread r([&] { (void)ch.receive(); });
        ch.send("m");
        r.join();
    }
    for (int i = 0; i < 3; ++i) rt.trace(TraceEvent::tool_send("t", "x"));
    for (int i = 0; i < 4; ++i) rt.trace(TraceEvent::tool_receive("t", "y"));
    for (int i = 0; i < 2; ++i) rt.trace(TraceEvent::tool_kill("t"));

    std::map<std::string, int> counts;
    std::istringstream in(sink.str());
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("TCA chan snd ", 0) == 0) ++counts["chan"];
        else if (line.rfind("TCA tool ", 0) == 0) ++counts["kill"];
        else if (line.find(" send: ") != std::string::npos) ++counts["send"];
        else if (line.find(" receive: ") != std::string::npos) ++counts["receive"];
    }
    CHECK(counts["chan"] == 5);
    CHECK(counts["send"] == 3);
    CHECK(counts["receive"] == 4);
    CHECK(counts["kill"] == 2);
}

TEST_CASE("trace lines are whole lines even under concurrent writers") {
    Runtime rt;
    std::ostringstream sink;
    rt.set_trace_sink(&sink);
    rt.set_debug(true);

    std::vector<std::thread> writers;
    for (int w = 0; w < 4; ++w)
        writers.emplace_back([&, w] {
            for (int i = 0; i < 100; ++i)
                rt.trace(TraceEvent::tool_send("w" + std::to_string(w), "m" + std::to_string(i)));
        });
    for (auto& t : writers) t.join();

    std::istringstream in(sink.str());
    std::string line;
    int count = 0;
    while (std::getline(in, line)) {
        ++count;
        CHECK(line.rfind("TCA w", 0) == 0);
        CHECK(line.find(" send: m") != std::string::npos);
    }
    CHECK(count == 400);
}
