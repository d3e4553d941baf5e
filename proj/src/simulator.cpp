// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/simulator.hpp"

#include <regex>
#include <stdexcept>

#include "tca/errors.hpp"
#include "tca/mux.hpp"

namespace tca::sim {

namespace {

// Unanchored search, for the prefix dispatch the processes use.
bool search(const std::regex& re, const std::string& s) {
    return std::regex_search(s, re);
}

const std::regex re_action_info{"^action-info"};
const std::regex re_process_list{"^process-list"};
const std::regex re_action_choose_list{"^action-choose-list"};
const std::regex re_halt{"^halt"};
const std::regex re_process_status{"^process-status"};
const std::regex re_quit{"^quit"};
const std::regex re_save{"^save"};
const std::regex re_goto{"^goto"};
const std::regex re_start{"^start"};
const std::regex re_action{"^action"};

} // namespace

Topology::Topology(Runtime& runtime) : rt(runtime) {
    for (const auto& key : channel_keys())
        channels_.emplace(key, std::make_unique<Channel>(rt, key));

    patterns.define("windows", R"(^window\((.*), (.*), (.*), (.*), (.*), (.*)\)$)");
    patterns.define("window", R"(^window\((.*)\)$)");
    patterns.define("start", R"(^start\((.*), (.*)\)$)");
    patterns.define("action", R"(^action\(info\((.*), (.*), (.*), (.*)\)\)$)");
    patterns.define("action-single", R"(^action\((.*)\)$)");
    patterns.define("break", R"(^break\((.*)\)$)");
    patterns.define("random", R"(^random\((.*)\)$)");
}

Channel& Topology::chan(const std::string& key) {
    auto it = channels_.find(key);
    if (it == channels_.end())
        throw std::out_of_range("topology: unknown channel '" + key + "'");
    return *it->second;
}

const std::vector<std::string>& Topology::channel_keys() {
    static const std::vector<std::string> keys = {
        "gf", "gp", "gt", "gb", "gd", "ga",             // gui -> window processes
        "kf", "kt", "kb", "kp", "ka", "kd", "kg",       // kernel -> others
        "ta", "td",                                     // tracectrl ->
        "ba", "bd",                                     // breakctrl ->
        "at", "ab", "ad", "ak",                         // actionchooser ->
        "pk", "dk", "fk",                               // -> kernel
    };
    return keys;
}

const std::vector<std::string>& tool_names() {
    static const std::vector<std::string> names = {
        "gui", "kernel", "process", "tracectrl",
        "breakctrl", "display", "actionchooser", "function",
    };
    return names;
}

const std::vector<std::string>& SimulatorConfig::command(const std::string& tool_name) const {
    auto it = tool_commands.find(tool_name);
    if (it == tool_commands.end() || it->second.empty())
        throw std::invalid_argument("simulator: no command configured for tool '" + tool_name + "'");
    return it->second;
}

SimulatorConfig stub_config(const std::string& stub_path, const std::string& scenario_dir,
                            const std::string& log_dir) {
    SimulatorConfig cfg;
    for (const auto& name : tool_names()) {
        std::vector<std::string> cmd = {stub_path, "--scenario", scenario_dir + "/" + name + ".tca"};
        if (!log_dir.empty()) {
            cmd.push_back("--log");
            cmd.push_back(log_dir + "/" + name + ".log");
        }
        cfg.tool_commands[name] = std::move(cmd);
    }
    return cfg;
}

// --- gui ----------------------------------------------------------------

void GuiControl::on_tool(const Message& line) {
    auto m = t_.patterns.match("rec-event", line);
    if (!m) {
        t_.rt.debug_note("gui: ignored line: " + line);
        return;
    }
    const std::string& event = (*m)[0];
    tool_.send("snd-ack-event(" + event + ")");
    auto w = t_.patterns.match("windows", event);
    if (!w) return; // wrong arity: acknowledged, nothing distributed
    static const char* keys[6] = {"gf", "gp", "gt", "gb", "gd", "ga"};
    for (int i = 0; i < 6; ++i)
        t_.chan(keys[i]).send("window(" + (*w)[static_cast<std::size_t>(i)] + ")");
}

void GuiControl::on_kg(const Message& msg) {
    if (msg == "quit") {
        tool_.kill();
        stop_ = true;
    }
}

// --- kernel ---------------------------------------------------------------

void KernelControl::startup() {
    tool_.send("snd-eval(get-action-info)");
}

void KernelControl::on_tool(const Message& line) {
    auto m = t_.patterns.match("rec-value", line);
    if (!m) {
        t_.rt.debug_note("kernel: ignored line: " + line);
        return;
    }
    const std::string& v = (*m)[0];
    if (search(re_action_info, v)) {
        t_.chan("kt").send(v);
        t_.chan("kb").send(v);
        tool_.send("snd-eval(get-process-list)");
    } else if (search(re_process_list, v)) {
        t_.chan("kp").send(v);
    } else if (search(re_action_choose_list, v)) {
        t_.chan("ka").send(v);
    } else if (search(re_halt, v)) {
        t_.chan("ka").send(v);
        t_.chan("kd").send(v);
    } else if (search(re_process_status, v)) {
        t_.chan("kd").send(v);
    } else if (search(re_quit, v)) {
        t_.rt.shutdown();
    } else {
        t_.rt.debug_note("kernel: ignored value: " + v);
    }
}

void KernelControl::on_pk(const Message& msg) {
    if (auto m = t_.patterns.match("start", msg)) {
        t_.chan("kd").send("start(" + (*m)[1] + ")");
        tool_.send("snd-do(" + msg + ")");
        tool_.send("snd-eval(compute-choose-list)");
    } else if (msg == "reset") {
        tool_.send("snd-do(myreset)");
        t_.chan("kd").send("reset");
        t_.chan("ka").send("reset");
        tool_.send("snd-eval(compute-choose-list)");
    } else {
        t_.rt.debug_note("kernel: ignored pk message: " + msg);
    }
}

void KernelControl::on_ak(const Message& msg) {
    if (auto m = t_.patterns.match("action", msg)) {
        // action(info(I, J, S, A)): S is display text, dropped on purpose.
        tool_.send("snd-do(action(" + (*m)[0] + ", " + (*m)[1] + ", " + (*m)[3] + "))");
        tool_.send("snd-eval(compute-choose-list)");
    } else if (search(re_save, msg)) {
        tool_.send("snd-do(" + msg + ")");
    } else if (search(re_goto, msg)) {
        tool_.send("snd-do(my" + msg + ")");
        tool_.send("snd-eval(compute-choose-list)");
    } else {
        t_.rt.debug_note("kernel: ignored ak message: " + msg);
    }
}

void KernelControl::on_fk(const Message& msg) {
    if (msg == "quit" || msg == "process-status")
        tool_.send("snd-eval(" + msg + ")");
    else
        t_.rt.debug_note("kernel: ignored fk message: " + msg);
}

// --- process ----------------------------------------------------------------

void ProcessControl::on_kp(const Message& msg) {
    if (search(re_process_list, msg)) {
        tool_.send("snd-do(" + msg + ")");
    } else if (msg == "quit") {
        tool_.kill();
        stop_ = true;
    } else {
        t_.rt.debug_note("process: ignored kp message: " + msg);
    }
}

void ProcessControl::on_tool(const Message& line) {
    auto m = t_.patterns.match("rec-event", line);
    if (!m) {
        t_.rt.debug_note("process: ignored line: " + line);
        return;
    }
    const std::string& event = (*m)[0];
    if (search(re_start, event) || event == "reset") {
        t_.chan("pk").send(event);
        tool_.send("snd-ack-event(" + event + ")");
    }
}

// --- tracectrl -----------------------------------------------------------

void TraceControl::on_kt(const Message& msg) {
    if (search(re_action_info, msg)) {
        tool_.send("snd-do(" + msg + ")");
    } else if (msg == "quit") {
        tool_.kill();
        stop_ = true;
    }
}

void TraceControl::on_at(const Message& msg) {
    if (auto m = t_.patterns.match("action-single", msg)) {
        action_ = (*m)[0];
        tool_.send("snd-eval(" + msg + ")");
    }
}

void TraceControl::on_tool(const Message& line) {
    auto m = t_.patterns.match("rec-value", line);
    if (!m) return;
    if ((*m)[0] == "trace") t_.chan("td").send("trace(" + action_ + ")");
    t_.chan("ta").send("done");
}

// --- breakctrl -----------------------------------------------------------

void BreakControl::on_kb(const Message& msg) {
    if (search(re_action_info, msg)) {
        tool_.send("snd-do(" + msg + ")");
    } else if (msg == "quit") {
        tool_.kill();
        stop_ = true;
    }
}

void BreakControl::on_ab(const Message& msg) {
    if (auto m = t_.patterns.match("action-single", msg)) {
        action_ = (*m)[0];
        tool_.send("snd-eval(" + msg + ")");
    } else if (search(re_action_choose_list, msg)) {
        tool_.send("snd-eval(" + msg + ")");
    }
}

void BreakControl::on_tool(const Message& line) {
    auto m = t_.patterns.match("rec-value", line);
    if (!m) return;
    if ((*m)[0] == "break") {
        t_.chan("bd").send("break(" + action_ + ")");
        t_.chan("ba").send("break");
    } else {
        t_.chan("ba").send("nobreak");
    }
}

// --- display -----------------------------------------------------------

void DisplayControl::on_kd(const Message& msg) {
    if (search(re_process_status, msg)) {
        tool_.send("snd-eval(" + msg + ")");
        (void)tool_.receive(); // value done
    } else if (msg == "quit") {
        tool_.kill();
        stop_ = true;
    } else {
        tool_.send("snd-do(" + msg + ")");
    }
}

void DisplayControl::on_td(const Message& msg) {
    tool_.send("snd-eval(" + msg + ")");
    (void)tool_.receive(); // value done
}

void DisplayControl::on_bd(const Message& msg) {
    if (auto m = t_.patterns.match("break", msg))
        tool_.send("snd-do(break-action(" + (*m)[0] + "))");
}

// --- actionchooser ----------------------------------------------------

void ActionChooserControl::on_ka(const Message& msg) {
    if (search(re_action_choose_list, msg)) {
        acl_ = msg;
        if (random_) {
            t_.chan("ab").send(msg);
            Message b = t_.chan("ba").receive();
            if (b == "break") {
                random_ = false;
                tool_.send("snd-do(random-off)");
            }
        }
        tool_.send("snd-do(" + acl_ + ")");
    } else if (msg == "halt") {
        tool_.send("snd-do(random-off)");
        random_ = false;
        tool_.send("snd-do(halt)");
    } else if (msg == "reset") {
        tool_.send("snd-do(reset)");
    } else if (msg == "quit") {
        tool_.kill();
        stop_ = true;
    } else {
        t_.rt.debug_note("actionchooser: ignored ka message: " + msg);
    }
}

void ActionChooserControl::on_tool(const Message& line) {
    auto m = t_.patterns.match("rec-event", line);
    if (!m) {
        t_.rt.debug_note("actionchooser: ignored line: " + line);
        return;
    }
    const std::string& event = (*m)[0];
    if (auto r = t_.patterns.match("random", event)) {
        tool_.send("snd-ack-event(" + event + ")");
        random_ = ((*r)[0] == "on");
    } else if (search(re_save, event) || search(re_goto, event)) {
        tool_.send("snd-ack-event(" + event + ")");
        t_.chan("ak").send(event);
    } else if (search(re_action, event)) {
        tool_.send("snd-ack-event(" + event + ")");
        t_.chan("ak").send(event);
        if (random_) {
            t_.chan("ab").send(event);
            action_ = event;
            Message b = t_.chan("ba").receive();
            if (b == "break") {
                random_ = false;
                tool_.send("snd-do(random-off)");
            } else if (b == "nobreak") {
                t_.chan("at").send(action_);
                (void)t_.chan("ta").receive(); // done
            }
        } else {
            t_.chan("at").send(event);
            (void)t_.chan("ta").receive(); // done
        }
    } else {
        t_.rt.debug_note("actionchooser: ignored event: " + event);
    }
}

// --- function -----------------------------------------------------------

void FunctionControl::on_tool(const Message& line) {
    auto m = t_.patterns.match("rec-event", line);
    if (!m) {
        t_.rt.debug_note("function: ignored line: " + line);
        return;
    }
    const std::string& event = (*m)[0];
    if (event == "quit")
        t_.chan("fk").send("quit");
    else if (event == "process-status")
        t_.chan("fk").send("process-status");
}

void FunctionControl::on_kf(const Message& msg) {
    if (msg == "quit") {
        tool_.kill();
        stop_ = true;
    }
}

// --- process bodies ---------------------------------------------------

namespace {

ToolPtr start_tool(Topology& t, const SimulatorConfig& cfg, const std::string& name,
                   const std::string& window_id) {
    auto argv = cfg.command(name);
    std::vector<std::string> args(argv.begin() + 1, argv.end());
    if (!window_id.empty()) args.push_back(window_id);
    auto tool = t.rt.make_tool(name, argv[0], std::move(args));
    tool->start();
    return tool;
}

// First message on the gui->X channel carries the tool's window id.
std::string await_window(Topology& t, const std::string& chan_key, const std::string& name) {
    Message msg = t.chan(chan_key).receive();
    auto m = t.patterns.match("window", msg);
    if (!m) throw ToolError(name + ": expected window(id), got '" + msg + "'");
    return (*m)[0];
}

void check(const std::string& name, const MuxResult& r) {
    if (r.status == MuxStatus::HandlerError)
        throw ToolError(name + ": " + r.diagnostic);
}

} // namespace

void run_gui(Topology& t, const SimulatorConfig& cfg) {
    auto tool = start_tool(t, cfg, "gui", "");
    GuiControl ctl(t, *tool);
    Mux mux(t.rt);
    mux.add(tool->source(), [&](const Message& s) {
        ctl.on_tool(s);
        if (ctl.stop_requested()) mux.stop();
    });
    mux.add(t.chan("kg").source(), [&](const Message& s) {
        ctl.on_kg(s);
        if (ctl.stop_requested()) mux.stop();
    });
    check("gui", mux.run());
}

void run_kernel(Topology& t, const SimulatorConfig& cfg) {
    auto tool = start_tool(t, cfg, "kernel", "");
    KernelControl ctl(t, *tool);
    ctl.startup();
    Mux mux(t.rt);
    mux.add(tool->source(), [&](const Message& s) { ctl.on_tool(s); });
    mux.add(t.chan("pk").source(), [&](const Message& s) { ctl.on_pk(s); });
    mux.add(t.chan("ak").source(), [&](const Message& s) { ctl.on_ak(s); });
    mux.add(t.chan("fk").source(), [&](const Message& s) { ctl.on_fk(s); });
    check("kernel", mux.run());
}

void run_process(Topology& t, const SimulatorConfig& cfg) {
    auto win = await_window(t, "gp", "process");
    auto tool = start_tool(t, cfg, "process", win);
    ProcessControl ctl(t, *tool);
    Mux mux(t.rt);
    mux.add(t.chan("kp").source(), [&](const Message& s) {
        ctl.on_kp(s);
        if (ctl.stop_requested()) mux.stop();
    });
    mux.add(tool->source(), [&](const Message& s) { ctl.on_tool(s); });
    check("process", mux.run());
}

void run_tracectrl(Topology& t, const SimulatorConfig& cfg) {
    auto win = await_window(t, "gt", "tracectrl");
    auto tool = start_tool(t, cfg, "tracectrl", win);
    TraceControl ctl(t, *tool);
    Mux mux(t.rt);
    mux.add(t.chan("kt").source(), [&](const Message& s) {
        ctl.on_kt(s);
        if (ctl.stop_requested()) mux.stop();
    });
    mux.add(t.chan("at").source(), [&](const Message& s) { ctl.on_at(s); });
    mux.add(tool->source(), [&](const Message& s) { ctl.on_tool(s); });
    check("tracectrl", mux.run());
}

void run_breakctrl(Topology& t, const SimulatorConfig& cfg) {
    auto win = await_window(t, "gb", "breakctrl");
    auto tool = start_tool(t, cfg, "breakctrl", win);
    BreakControl ctl(t, *tool);
    Mux mux(t.rt);
    mux.add(t.chan("kb").source(), [&](const Message& s) {
        ctl.on_kb(s);
        if (ctl.stop_requested()) mux.stop();
    });
    mux.add(t.chan("ab").source(), [&](const Message& s) { ctl.on_ab(s); });
    mux.add(tool->source(), [&](const Message& s) { ctl.on_tool(s); });
    check("breakctrl", mux.run());
}

void run_display(Topology& t, const SimulatorConfig& cfg) {
    auto win = await_window(t, "gd", "display");
    auto tool = start_tool(t, cfg, "display", win);
    DisplayControl ctl(t, *tool);
    Mux mux(t.rt);
    // The display tool's replies are consumed by blocking receives inside
    // the handlers; the tool is deliberately not a mux source here.
    mux.add(t.chan("kd").source(), [&](const Message& s) {
        ctl.on_kd(s);
        if (ctl.stop_requested()) mux.stop();
    });
    mux.add(t.chan("td").source(), [&](const Message& s) { ctl.on_td(s); });
    mux.add(t.chan("bd").source(), [&](const Message& s) { ctl.on_bd(s); });
    check("display", mux.run());
}

void run_actionchooser(Topology& t, const SimulatorConfig& cfg) {
    auto win = await_window(t, "ga", "actionchooser");
    auto tool = start_tool(t, cfg, "actionchooser", win);
    ActionChooserControl ctl(t, *tool);
    Mux mux(t.rt);
    mux.add(t.chan("ka").source(), [&](const Message& s) {
        ctl.on_ka(s);
        if (ctl.stop_requested()) mux.stop();
    });
    mux.add(tool->source(), [&](const Message& s) { ctl.on_tool(s); });
    check("actionchooser", mux.run());
}

void run_function(Topology& t, const SimulatorConfig& cfg) {
    auto win = await_window(t, "gf", "function");
    auto tool = start_tool(t, cfg, "function", win);
    FunctionControl ctl(t, *tool);
    Mux mux(t.rt);
    mux.add(tool->source(), [&](const Message& s) { ctl.on_tool(s); });
    mux.add(t.chan("kf").source(), [&](const Message& s) {
        ctl.on_kf(s);
        if (ctl.stop_requested()) mux.stop();
    });
    check("function", mux.run());
}

RunResult run_simulator(Runtime& rt, const SimulatorConfig& cfg) {
    Topology t(rt);
    return rt.run({
        [&] { run_gui(t, cfg); },
        [&] { run_kernel(t, cfg); },
        [&] { run_process(t, cfg); },
        [&] { run_tracectrl(t, cfg); },
        [&] { run_breakctrl(t, cfg); },
        [&] { run_display(t, cfg); },
        [&] { run_actionchooser(t, cfg); },
        [&] { run_function(t, cfg); },
    });
}

} // namespace tca::sim
