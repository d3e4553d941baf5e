// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0
//
// Table-driven branch tests for the eight simulator processes: each case
// feeds one line into a handler (with a scripted fake tool and live peer
// channels) and asserts the full set of outbound effects. Shared between
// the unit suite and the acceptance suite.

#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tca/errors.hpp"
#include "tca/runtime.hpp"
#include "tca/simulator.hpp"
#include "test_util.hpp"

namespace tca::test {

struct BranchOutcome {
    std::string id;
    bool ok;
    std::string detail;
};

namespace branch_detail {

using namespace std::chrono_literals;

inline void check_true(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

inline void check_eq(const std::vector<std::string>& got, const std::vector<std::string>& want,
                     const std::string& what) {
    if (got == want) return;
    std::ostringstream os;
    os << what << ": got [";
    for (std::size_t i = 0; i < got.size(); ++i) os << (i ? ", " : "") << "'" << got[i] << "'";
    os << "], want [";
    for (std::size_t i = 0; i < want.size(); ++i) os << (i ? ", " : "") << "'" << want[i] << "'";
    os << "]";
    throw std::runtime_error(os.str());
}

struct Ctx {
    Runtime rt;
    sim::Topology topo{rt};
    FakeTool tool{"tool"};

    // Takes one message from a peer channel and checks it.
    void expect(const std::string& key, const Message& want) {
        auto got = topo.chan(key).receive();
        if (got != want)
            throw std::runtime_error("channel " + key + ": expected '" + want + "', got '" +
                                     got + "'");
    }

    // Feeds a peer channel (blocks until the handler takes it).
    void feed(const std::string& key, const Message& msg) { topo.chan(key).send(msg); }

    // Runs the handler call and the peer script concurrently. Rendezvous
    // makes this exact: a handler that sends more than the script expects
    // blocks, a handler that sends less leaves the script blocked; either
    // trips the watchdog and fails the case.
    void exchange(std::function<void()> handler, std::function<void()> script = {}) {
        std::exception_ptr handler_err, script_err;
        std::promise<void> hp, sp;
        auto hf = hp.get_future();
        auto sf = sp.get_future();

        std::thread ht([&] {
            try {
                handler();
            } catch (const ShutdownInterrupt&) {
                handler_err = std::make_exception_ptr(
                    std::runtime_error("handler blocked on an unexpected exchange"));
            } catch (...) {
                handler_err = std::current_exception();
            }
            hp.set_value();
        });
        std::thread st([&] {
            try {
                if (script) script();
            } catch (const ShutdownInterrupt&) {
                script_err = std::make_exception_ptr(
                    std::runtime_error("peer script blocked: handler sent less than expected"));
            } catch (...) {
                script_err = std::current_exception();
            }
            sp.set_value();
        });

        bool timely = hf.wait_for(5s) == std::future_status::ready;
        timely = (sf.wait_for(5s) == std::future_status::ready) && timely;
        if (!timely) rt.shutdown(); // unblock whoever is stuck
        ht.join();
        st.join();
        if (script_err) std::rethrow_exception(script_err);
        if (handler_err) std::rethrow_exception(handler_err);
        if (!timely) throw std::runtime_error("exchange timed out");
    }
};

struct Case {
    const char* id;
    std::function<void(Ctx&)> fn;
};

inline const std::vector<Case>& cases() {
    using sim::ActionChooserControl;
    using sim::BreakControl;
    using sim::DisplayControl;
    using sim::FunctionControl;
    using sim::GuiControl;
    using sim::KernelControl;
    using sim::ProcessControl;
    using sim::TraceControl;

    static const std::vector<Case> cs = {
        // --- gui ---------------------------------------------------------
        {"gui.event.window6",
         [](Ctx& c) {
             GuiControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(window(a, b, c, d, e, f))"); },
                        [&] {
                            c.expect("gf", "window(a)");
                            c.expect("gp", "window(b)");
                            c.expect("gt", "window(c)");
                            c.expect("gb", "window(d)");
                            c.expect("gd", "window(e)");
                            c.expect("ga", "window(f)");
                        });
             check_eq(c.tool.sent(), {"snd-ack-event(window(a, b, c, d, e, f))"}, "tool sends");
             check_true(!ctl.stop_requested(), "gui keeps looping");
         }},
        {"gui.event.wrong-arity",
         [](Ctx& c) {
             GuiControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(window(a))"); });
             check_eq(c.tool.sent(), {"snd-ack-event(window(a))"}, "ack still sent");
         }},
        {"gui.line.non-event",
         [](Ctx& c) {
             GuiControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("quit"); });
             check_eq(c.tool.sent(), {}, "nothing sent");
         }},
        {"gui.kg.quit",
         [](Ctx& c) {
             GuiControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kg("quit"); });
             check_true(c.tool.killed(), "gui tool killed");
             check_true(ctl.stop_requested(), "gui stops");
         }},
        {"gui.kg.other",
         [](Ctx& c) {
             GuiControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kg("reset"); });
             check_true(!c.tool.killed() && !ctl.stop_requested(), "ignored");
         }},

        // --- kernel -------------------------------------------------------
        {"kernel.startup",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.startup(); });
             check_eq(c.tool.sent(), {"snd-eval(get-action-info)"}, "startup eval");
         }},
        {"kernel.value.action-info",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-value(action-info(ai))"); },
                        [&] {
                            c.expect("kt", "action-info(ai)");
                            c.expect("kb", "action-info(ai)");
                        });
             check_eq(c.tool.sent(), {"snd-eval(get-process-list)"}, "tool sends");
         }},
        {"kernel.value.process-list",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-value(process-list(pl))"); },
                        [&] { c.expect("kp", "process-list(pl)"); });
             check_eq(c.tool.sent(), {}, "nothing sent to tool");
         }},
        {"kernel.value.action-choose-list",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-value(action-choose-list(acl))"); },
                        [&] { c.expect("ka", "action-choose-list(acl)"); });
             check_eq(c.tool.sent(), {}, "nothing sent to tool");
         }},
        {"kernel.value.halt",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-value(halt(t1))"); },
                        [&] {
                            c.expect("ka", "halt(t1)");
                            c.expect("kd", "halt(t1)");
                        });
             check_eq(c.tool.sent(), {}, "nothing sent to tool");
         }},
        {"kernel.value.process-status",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-value(process-status(st))"); },
                        [&] { c.expect("kd", "process-status(st)"); });
             check_eq(c.tool.sent(), {}, "nothing sent to tool");
         }},
        {"kernel.value.quit",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-value(quit)"); });
             check_true(c.rt.shutdown_requested(), "shutdown invoked");
         }},
        {"kernel.value.unmatched",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-value(mystery(1))"); });
             check_eq(c.tool.sent(), {}, "ignored");
             check_true(!c.rt.shutdown_requested(), "no shutdown");
         }},
        {"kernel.line.non-value",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(x)"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"kernel.pk.start",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_pk("start(2, P)"); },
                        [&] { c.expect("kd", "start(P)"); });
             check_eq(c.tool.sent(), {"snd-do(start(2, P))", "snd-eval(compute-choose-list)"},
                      "tool sends");
         }},
        {"kernel.pk.reset",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_pk("reset"); },
                        [&] {
                            c.expect("kd", "reset");
                            c.expect("ka", "reset");
                        });
             check_eq(c.tool.sent(), {"snd-do(myreset)", "snd-eval(compute-choose-list)"},
                      "tool sends");
         }},
        {"kernel.pk.other",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_pk("mystery"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"kernel.ak.action",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ak("action(info(1, 2, shown, a1))"); });
             // the display text is dropped on purpose
             check_eq(c.tool.sent(), {"snd-do(action(1, 2, a1))", "snd-eval(compute-choose-list)"},
                      "tool sends");
         }},
        {"kernel.ak.save",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ak("save(3)"); });
             check_eq(c.tool.sent(), {"snd-do(save(3))"}, "tool sends");
         }},
        {"kernel.ak.goto",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ak("goto(7)"); });
             check_eq(c.tool.sent(), {"snd-do(mygoto(7))", "snd-eval(compute-choose-list)"},
                      "tool sends");
         }},
        {"kernel.ak.other",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ak("mystery(1)"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"kernel.fk.quit",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_fk("quit"); });
             check_eq(c.tool.sent(), {"snd-eval(quit)"}, "tool sends");
         }},
        {"kernel.fk.process-status",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_fk("process-status"); });
             check_eq(c.tool.sent(), {"snd-eval(process-status)"}, "tool sends");
         }},
        {"kernel.fk.other",
         [](Ctx& c) {
             KernelControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_fk("nonsense"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},

        // --- process -------------------------------------------------------
        {"process.kp.process-list",
         [](Ctx& c) {
             ProcessControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kp("process-list(pl)"); });
             check_eq(c.tool.sent(), {"snd-do(process-list(pl))"}, "tool sends");
         }},
        {"process.kp.quit",
         [](Ctx& c) {
             ProcessControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kp("quit"); });
             check_true(c.tool.killed() && ctl.stop_requested(), "killed and stopped");
         }},
        {"process.kp.other",
         [](Ctx& c) {
             ProcessControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kp("mystery"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"process.event.start",
         [](Ctx& c) {
             ProcessControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(start(1, Main))"); },
                        [&] { c.expect("pk", "start(1, Main)"); });
             check_eq(c.tool.sent(), {"snd-ack-event(start(1, Main))"}, "ack");
         }},
        {"process.event.reset",
         [](Ctx& c) {
             ProcessControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(reset)"); },
                        [&] { c.expect("pk", "reset"); });
             check_eq(c.tool.sent(), {"snd-ack-event(reset)"}, "ack");
         }},
        {"process.event.other",
         [](Ctx& c) {
             ProcessControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(winid(x))"); });
             check_eq(c.tool.sent(), {}, "no forward, no ack");
         }},
        {"process.line.non-event",
         [](Ctx& c) {
             ProcessControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("junk"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},

        // --- tracectrl ----------------------------------------------------
        {"tracectrl.kt.action-info",
         [](Ctx& c) {
             TraceControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kt("action-info(ai)"); });
             check_eq(c.tool.sent(), {"snd-do(action-info(ai))"}, "tool sends");
         }},
        {"tracectrl.kt.quit",
         [](Ctx& c) {
             TraceControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kt("quit"); });
             check_true(c.tool.killed() && ctl.stop_requested(), "killed and stopped");
         }},
        {"tracectrl.at.action",
         [](Ctx& c) {
             TraceControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_at("action(a1)"); });
             check_eq(c.tool.sent(), {"snd-eval(action(a1))"}, "eval");
         }},
        {"tracectrl.at.other",
         [](Ctx& c) {
             TraceControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_at("mystery"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"tracectrl.value.trace",
         [](Ctx& c) {
             TraceControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_at("action(a1)"); });
             c.exchange([&] { ctl.on_tool("snd-value(trace)"); },
                        [&] {
                            c.expect("td", "trace(a1)");
                            c.expect("ta", "done");
                        });
         }},
        {"tracectrl.value.notrace",
         [](Ctx& c) {
             TraceControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_at("action(a1)"); });
             c.exchange([&] { ctl.on_tool("snd-value(notrace)"); },
                        [&] { c.expect("ta", "done"); }); // td stays silent
         }},
        {"tracectrl.line.non-value",
         [](Ctx& c) {
             TraceControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(x)"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},

        // --- breakctrl ----------------------------------------------------
        {"breakctrl.kb.action-info",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kb("action-info(ai)"); });
             check_eq(c.tool.sent(), {"snd-do(action-info(ai))"}, "tool sends");
         }},
        {"breakctrl.kb.quit",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kb("quit"); });
             check_true(c.tool.killed() && ctl.stop_requested(), "killed and stopped");
         }},
        {"breakctrl.ab.action",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ab("action(a2)"); });
             check_eq(c.tool.sent(), {"snd-eval(action(a2))"}, "eval");
         }},
        {"breakctrl.ab.action-choose-list",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ab("action-choose-list(L)"); });
             check_eq(c.tool.sent(), {"snd-eval(action-choose-list(L))"}, "eval");
         }},
        {"breakctrl.ab.other",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ab("mystery"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"breakctrl.value.break",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ab("action(a2)"); });
             c.exchange([&] { ctl.on_tool("snd-value(break)"); },
                        [&] {
                            c.expect("bd", "break(a2)");
                            c.expect("ba", "break");
                        });
         }},
        {"breakctrl.value.nobreak",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ab("action(a2)"); });
             c.exchange([&] { ctl.on_tool("snd-value(nobreak)"); },
                        [&] { c.expect("ba", "nobreak"); }); // bd stays silent
         }},
        {"breakctrl.line.non-value",
         [](Ctx& c) {
             BreakControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(x)"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},

        // --- display -------------------------------------------------------
        {"display.kd.process-status",
         [](Ctx& c) {
             DisplayControl ctl(c.topo, c.tool);
             c.tool.push_reply("snd-value(done)");
             c.exchange([&] { ctl.on_kd("process-status(st)"); });
             check_eq(c.tool.sent(), {"snd-eval(process-status(st))"}, "eval");
             check_true(c.tool.pending_replies() == 0, "awaited the tool's value");
         }},
        {"display.kd.quit",
         [](Ctx& c) {
             DisplayControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kd("quit"); });
             check_true(c.tool.killed() && ctl.stop_requested(), "killed and stopped");
         }},
        {"display.kd.other-do",
         [](Ctx& c) {
             DisplayControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kd("start(P)"); });
             check_eq(c.tool.sent(), {"snd-do(start(P))"}, "default do branch");
         }},
        {"display.td.trace",
         [](Ctx& c) {
             DisplayControl ctl(c.topo, c.tool);
             c.tool.push_reply("snd-value(done)");
             c.exchange([&] { ctl.on_td("trace(a1)"); });
             check_eq(c.tool.sent(), {"snd-eval(trace(a1))"}, "eval");
             check_true(c.tool.pending_replies() == 0, "awaited the tool's value");
         }},
        {"display.bd.break",
         [](Ctx& c) {
             DisplayControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_bd("break(a2)"); });
             check_eq(c.tool.sent(), {"snd-do(break-action(a2))"}, "break action");
         }},
        {"display.bd.other",
         [](Ctx& c) {
             DisplayControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_bd("break"); }); // bare break: unhandled
             check_eq(c.tool.sent(), {}, "ignored");
         }},

        // --- actionchooser --------------------------------------------------
        {"actionchooser.ka.acl.random-off",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ka("action-choose-list(L)"); });
             check_eq(c.tool.sent(), {"snd-do(action-choose-list(L))"}, "forwarded to tool");
         }},
        {"actionchooser.ka.acl.random-on-break",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(random(on))"); });
             c.exchange([&] { ctl.on_ka("action-choose-list(L)"); },
                        [&] {
                            c.expect("ab", "action-choose-list(L)");
                            c.feed("ba", "break");
                        });
             check_eq(c.tool.sent(),
                      {"snd-ack-event(random(on))", "snd-do(random-off)",
                       "snd-do(action-choose-list(L))"},
                      "tool sends");
             check_true(!ctl.random_mode(), "random cleared");
         }},
        {"actionchooser.ka.acl.random-on-nobreak",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(random(on))"); });
             c.exchange([&] { ctl.on_ka("action-choose-list(L)"); },
                        [&] {
                            c.expect("ab", "action-choose-list(L)");
                            c.feed("ba", "nobreak");
                        });
             check_eq(c.tool.sent(),
                      {"snd-ack-event(random(on))", "snd-do(action-choose-list(L))"},
                      "tool sends");
             check_true(ctl.random_mode(), "random kept");
         }},
        {"actionchooser.ka.halt",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(random(on))"); });
             c.exchange([&] { ctl.on_ka("halt"); });
             check_eq(c.tool.sent(),
                      {"snd-ack-event(random(on))", "snd-do(random-off)", "snd-do(halt)"},
                      "tool sends");
             check_true(!ctl.random_mode(), "random cleared");
         }},
        {"actionchooser.ka.reset",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ka("reset"); });
             check_eq(c.tool.sent(), {"snd-do(reset)"}, "tool sends");
         }},
        {"actionchooser.ka.quit",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_ka("quit"); });
             check_true(c.tool.killed() && ctl.stop_requested(), "killed and stopped");
         }},
        {"actionchooser.ka.other",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             // halt with an argument does not hit the bare-halt branch
             c.exchange([&] { ctl.on_ka("halt(t1)"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"actionchooser.event.random-on",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(random(on))"); });
             check_eq(c.tool.sent(), {"snd-ack-event(random(on))"}, "ack");
             check_true(ctl.random_mode(), "random set");
         }},
        {"actionchooser.event.random-off",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(random(on))"); });
             c.exchange([&] { ctl.on_tool("snd-event(random(off))"); });
             check_true(!ctl.random_mode(), "random cleared");
         }},
        {"actionchooser.event.save",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(save(3))"); },
                        [&] { c.expect("ak", "save(3)"); });
             check_eq(c.tool.sent(), {"snd-ack-event(save(3))"}, "ack");
         }},
        {"actionchooser.event.goto",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(goto(5))"); },
                        [&] { c.expect("ak", "goto(5)"); });
             check_eq(c.tool.sent(), {"snd-ack-event(goto(5))"}, "ack");
         }},
        {"actionchooser.event.action.random-off",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(action(info(1, 1, s, a1)))"); },
                        [&] {
                            c.expect("ak", "action(info(1, 1, s, a1))");
                            c.expect("at", "action(info(1, 1, s, a1))");
                            c.feed("ta", "done");
                        });
             check_eq(c.tool.sent(), {"snd-ack-event(action(info(1, 1, s, a1)))"}, "ack");
         }},
        {"actionchooser.event.action.random-on-break",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(random(on))"); });
             c.exchange([&] { ctl.on_tool("snd-event(action(X))"); },
                        [&] {
                            c.expect("ak", "action(X)");
                            c.expect("ab", "action(X)");
                            c.feed("ba", "break");
                        });
             check_eq(c.tool.sent(),
                      {"snd-ack-event(random(on))", "snd-ack-event(action(X))",
                       "snd-do(random-off)"},
                      "tool sends");
             check_true(!ctl.random_mode(), "random cleared");
         }},
        {"actionchooser.event.action.random-on-nobreak",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(random(on))"); });
             c.exchange([&] { ctl.on_tool("snd-event(action(X))"); },
                        [&] {
                            c.expect("ak", "action(X)");
                            c.expect("ab", "action(X)");
                            c.feed("ba", "nobreak");
                            c.expect("at", "action(X)");
                            c.feed("ta", "done");
                        });
             check_eq(c.tool.sent(), {"snd-ack-event(random(on))", "snd-ack-event(action(X))"},
                      "tool sends");
             check_true(ctl.random_mode(), "random kept");
         }},
        {"actionchooser.event.other",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(mystery(1))"); });
             check_eq(c.tool.sent(), {}, "ignored, no ack");
         }},
        {"actionchooser.line.non-event",
         [](Ctx& c) {
             ActionChooserControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("garbage"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},

        // --- function -------------------------------------------------------
        {"function.event.quit",
         [](Ctx& c) {
             FunctionControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(quit)"); },
                        [&] { c.expect("fk", "quit"); });
             check_eq(c.tool.sent(), {}, "no ack");
         }},
        {"function.event.process-status",
         [](Ctx& c) {
             FunctionControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(process-status)"); },
                        [&] { c.expect("fk", "process-status"); });
             check_eq(c.tool.sent(), {}, "no ack");
         }},
        {"function.event.other",
         [](Ctx& c) {
             FunctionControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("snd-event(hello)"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"function.line.non-event",
         [](Ctx& c) {
             FunctionControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_tool("junk"); });
             check_eq(c.tool.sent(), {}, "ignored");
         }},
        {"function.kf.quit",
         [](Ctx& c) {
             FunctionControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kf("quit"); });
             check_true(c.tool.killed() && ctl.stop_requested(), "killed and stopped");
         }},
        {"function.kf.other",
         [](Ctx& c) {
             FunctionControl ctl(c.topo, c.tool);
             c.exchange([&] { ctl.on_kf("mystery"); });
             check_true(!c.tool.killed() && !ctl.stop_requested(), "ignored");
         }},
    };
    return cs;
}

} // namespace branch_detail

inline std::vector<std::string> required_branches() {
    std::vector<std::string> ids;
    for (const auto& c : branch_detail::cases()) ids.emplace_back(c.id);
    return ids;
}

inline std::vector<BranchOutcome> run_branch_table() {
    std::vector<BranchOutcome> out;
    for (const auto& c : branch_detail::cases()) {
        try {
            branch_detail::Ctx ctx;
            c.fn(ctx);
            out.push_back({c.id, true, {}});
        } catch (const std::exception& e) {
            out.push_back({c.id, false, e.what()});
        } catch (...) {
            out.push_back({c.id, false, "unknown failure"});
        }
    }
    return out;
}

} // namespace tca::test
