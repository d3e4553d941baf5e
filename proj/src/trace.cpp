// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/trace.hpp"

namespace tca {

std::string TraceEvent::render() const {
    switch (kind) {
    case Kind::ChanSend:
        return "TCA chan snd " + entity_id + " : " + payload.value_or("");
    case Kind::ToolSend:
        return "TCA " + entity_id + " send: " + payload.value_or("");
    case Kind::ToolReceive:
        return "TCA " + entity_id + " receive: " + payload.value_or("");
    case Kind::ToolKill:
        return "TCA tool " + entity_id + " killed";
    }
    return {};
}

TraceEvent TraceEvent::chan_send(std::string id, std::string message) {
    return {Kind::ChanSend, std::move(id), std::move(message)};
}

TraceEvent TraceEvent::tool_send(std::string id, std::string message) {
    return {Kind::ToolSend, std::move(id), std::move(message)};
}

TraceEvent TraceEvent::tool_receive(std::string id, std::string message) {
    return {Kind::ToolReceive, std::move(id), std::move(message)};
}

TraceEvent TraceEvent::tool_kill(std::string id) {
    return {Kind::ToolKill, std::move(id), std::nullopt};
}

} // namespace tca
