// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/pingpong.hpp"

#include <stdexcept>

#include "tca/channel.hpp"
#include "tca/errors.hpp"
#include "tca/mux.hpp"
#include "tca/term.hpp"

namespace tca {

namespace {

std::vector<std::string> cmd_args(const std::vector<std::string>& cmd) {
    if (cmd.empty()) throw std::invalid_argument("pingpong: empty tool command");
    return {cmd.begin() + 1, cmd.end()};
}

} // namespace

PingPongReport run_pingpong(Runtime& rt, std::vector<std::string> tool1_cmd,
                            std::vector<std::string> tool2_cmd) {
    Channel chan12(rt, "12");
    Channel chan21(rt, "21");
    PatternTable patterns;

    PingPongReport report;

    auto comp1 = [&] {
        auto tool = rt.make_tool("comp1", tool1_cmd[0], cmd_args(tool1_cmd));
        report.tool1 = tool;
        tool->start();
        Mux mux(rt);
        mux.add(tool->source(), [&](const Message& line) {
            auto m = patterns.match("rec-event", line);
            if (!m) {
                rt.debug_note("comp1: ignored line: " + line);
                return;
            }
            const std::string& event = (*m)[0];
            if (event == "quit") {
                tool->send("quit");
                // Wait for the tool to finish before pulling the plug, so a
                // conforming tool's own exit is what ends it.
                try {
                    for (;;) (void)tool->receive();
                } catch (const ToolEof&) {
                }
                rt.shutdown();
            } else {
                chan12.send(event);
                (void)chan21.receive();
                tool->send("snd-ack-event(" + event + ")");
            }
        });
        auto r = mux.run();
        if (r.status == MuxStatus::Exhausted)
            throw ToolError("comp1: tool output ended before quit");
        if (r.status == MuxStatus::HandlerError)
            throw ToolError("comp1: " + r.diagnostic);
    };

    auto comp2 = [&] {
        auto tool = rt.make_tool("comp2", tool2_cmd[0], cmd_args(tool2_cmd));
        report.tool2 = tool;
        tool->start();
        Mux mux(rt);
        mux.add(chan12.source(), [&](const Message& msg) {
            if (msg == "quit") {
                tool->kill();
                mux.stop();
                return;
            }
            tool->send("snd-eval(" + msg + ")");
            Message answer = tool->receive();
            if (patterns.match("rec-value", answer))
                chan21.send("ack");
            else
                rt.debug_note("comp2: ignored line: " + answer);
        });
        auto r = mux.run();
        if (r.status == MuxStatus::HandlerError)
            throw ToolError("comp2: " + r.diagnostic);
    };

    report.result = rt.run({comp1, comp2});
    return report;
}

} // namespace tca
