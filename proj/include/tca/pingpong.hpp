// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "tca/runtime.hpp"
#include "tca/tool.hpp"

namespace tca {

struct PingPongReport {
    RunResult result;
    ToolPtr tool1; // handle kept for wait-status inspection after the run
    ToolPtr tool2;
};

// Two-tool case study over channels "12" and "21".
//
// comp1 starts tool1 and loops on its events: an event E other than quit
// is forwarded on channel 12, answered on channel 21, and acknowledged
// back to tool1 with the original event term; the quit event sends "quit"
// to tool1, waits for its output to close, and shuts the runtime down.
//
// comp2 starts tool2 and loops on channel 12: a "quit" message kills
// tool2 and stops; any other message M is evaluated as snd-eval(M), the
// tool's snd-value answer is awaited, and "ack" is sent on channel 21.
//
// A tool that goes end-of-stream before the quit flow aborts the run with
// a diagnostic.
PingPongReport run_pingpong(Runtime& rt, std::vector<std::string> tool1_cmd,
                            std::vector<std::string> tool2_cmd);

} // namespace tca
