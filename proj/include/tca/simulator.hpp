// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tca/channel.hpp"
#include "tca/runtime.hpp"
#include "tca/term.hpp"
#include "tca/tool.hpp"

namespace tca::sim {

// The simulator coordination topology: 24 named rendezvous channels and
// eight coordinator processes (gui, kernel, process, tracectrl, breakctrl,
// display, actionchooser, function), each owning exactly one tool that the
// process itself starts. Channel keys name the edge by its endpoints
// (e.g. "kt" kernel->tracectrl, "ta" tracectrl->actionchooser); "ad" and
// "dk" exist in the map but no process uses them.
class Topology {
public:
    explicit Topology(Runtime& runtime);
    Topology(const Topology&) = delete;
    Topology& operator=(const Topology&) = delete;

    Runtime& rt;
    PatternTable patterns; // built-ins plus the application patterns below

    Channel& chan(const std::string& key);
    static const std::vector<std::string>& channel_keys();

private:
    std::map<std::string, std::unique_ptr<Channel>> channels_;
};

// Per-tool command lines; keys are the eight tool names above. Processes
// that receive a window id append it as the tool's final argument.
struct SimulatorConfig {
    std::map<std::string, std::vector<std::string>> tool_commands;

    const std::vector<std::string>& command(const std::string& tool_name) const;
};

// Configuration running every tool as `<stub> --scenario <dir>/<name>.tca`
// (plus `--log <log_dir>/<name>.log` when log_dir is given).
SimulatorConfig stub_config(const std::string& stub_path, const std::string& scenario_dir,
                            const std::string& log_dir = "");

const std::vector<std::string>& tool_names();

// Runs the eight processes under the runtime until completion or shutdown.
RunResult run_simulator(Runtime& rt, const SimulatorConfig& cfg);

// ---------------------------------------------------------------------
// Per-process message logic, split out from the mux wiring so tests can
// feed single lines and observe the full set of outbound effects.
// stop_requested() reports that the process wants its mux stopped (its
// tool has been killed).

class GuiControl {
public:
    GuiControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void on_tool(const Message& line);
    void on_kg(const Message& msg);
    bool stop_requested() const { return stop_; }

private:
    Topology& t_;
    ToolPort& tool_;
    bool stop_ = false;
};

class KernelControl {
public:
    KernelControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void startup(); // initial snd-eval(get-action-info)
    void on_tool(const Message& line);
    void on_pk(const Message& msg);
    void on_ak(const Message& msg);
    void on_fk(const Message& msg);
    bool stop_requested() const { return false; } // kernel stops via shutdown

private:
    Topology& t_;
    ToolPort& tool_;
};

class ProcessControl {
public:
    ProcessControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void on_kp(const Message& msg);
    void on_tool(const Message& line);
    bool stop_requested() const { return stop_; }

private:
    Topology& t_;
    ToolPort& tool_;
    bool stop_ = false;
};

class TraceControl {
public:
    TraceControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void on_kt(const Message& msg);
    void on_at(const Message& msg);
    void on_tool(const Message& line);
    bool stop_requested() const { return stop_; }

private:
    Topology& t_;
    ToolPort& tool_;
    std::string action_;
    bool stop_ = false;
};

class BreakControl {
public:
    BreakControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void on_kb(const Message& msg);
    void on_ab(const Message& msg);
    void on_tool(const Message& line);
    bool stop_requested() const { return stop_; }

private:
    Topology& t_;
    ToolPort& tool_;
    std::string action_;
    bool stop_ = false;
};

class DisplayControl {
public:
    DisplayControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void on_kd(const Message& msg);
    void on_td(const Message& msg);
    void on_bd(const Message& msg);
    bool stop_requested() const { return stop_; }

private:
    Topology& t_;
    ToolPort& tool_;
    bool stop_ = false;
};

class ActionChooserControl {
public:
    ActionChooserControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void on_ka(const Message& msg);
    void on_tool(const Message& line);
    bool stop_requested() const { return stop_; }
    bool random_mode() const { return random_; }

private:
    Topology& t_;
    ToolPort& tool_;
    bool random_ = false;
    std::string acl_;
    std::string action_;
    bool stop_ = false;
};

class FunctionControl {
public:
    FunctionControl(Topology& t, ToolPort& tool) : t_(t), tool_(tool) {}
    void on_tool(const Message& line);
    void on_kf(const Message& msg);
    bool stop_requested() const { return stop_; }

private:
    Topology& t_;
    ToolPort& tool_;
    bool stop_ = false;
};

// Process bodies (window wait where applicable, tool start, mux loop).
void run_gui(Topology& t, const SimulatorConfig& cfg);
void run_kernel(Topology& t, const SimulatorConfig& cfg);
void run_process(Topology& t, const SimulatorConfig& cfg);
void run_tracectrl(Topology& t, const SimulatorConfig& cfg);
void run_breakctrl(Topology& t, const SimulatorConfig& cfg);
void run_display(Topology& t, const SimulatorConfig& cfg);
void run_actionchooser(Topology& t, const SimulatorConfig& cfg);
void run_function(Topology& t, const SimulatorConfig& cfg);

} // namespace tca::sim
