// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

namespace tca {

// One debug record of a channel send, tool send/receive, or tool kill.
// Renders to exactly one of the four canonical trace-line formats:
//
//   TCA chan snd <id> : <message>
//   TCA <id> send: <message>
//   TCA <id> receive: <message>
//   TCA tool <id> killed
struct TraceEvent {
    enum class Kind { ChanSend, ToolSend, ToolReceive, ToolKill };

    Kind kind;
    std::string entity_id;
    std::optional<std::string> payload;

    std::string render() const;

    static TraceEvent chan_send(std::string id, std::string message);
    static TraceEvent tool_send(std::string id, std::string message);
    static TraceEvent tool_receive(std::string id, std::string message);
    static TraceEvent tool_kill(std::string id);
};

} // namespace tca
