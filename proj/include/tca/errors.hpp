// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace tca {

// Control signal thrown out of blocking operations when the runtime shuts
// down. Deliberately not derived from std::exception so that ordinary
// catch (std::exception&) blocks in handlers do not swallow a cancellation.
struct ShutdownInterrupt final {};

class ToolError : public std::runtime_error {
public:
    explicit ToolError(const std::string& what) : std::runtime_error(what) {}
};

// Terminal outcome of a receive once the tool closed its output and the
// line queue is drained. Every subsequent receive repeats it.
class ToolEof : public std::runtime_error {
public:
    explicit ToolEof(const std::string& tool_id)
        : std::runtime_error("tool " + tool_id + ": end of output"), id_(tool_id) {}

    const std::string& tool_id() const noexcept { return id_; }

private:
    std::string id_;
};

} // namespace tca
