// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end for the case studies and the stub tool.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "tca/pingpong.hpp"
#include "tca/runtime.hpp"
#include "tca/scenario.hpp"
#include "tca/simulator.hpp"

namespace fs = std::filesystem;

namespace {

// Directory holding this executable; the stub binary lives next to it.
fs::path self_dir() {
    std::error_code ec;
    auto p = fs::read_symlink("/proc/self/exe", ec);
    if (ec) return fs::current_path();
    return p.parent_path();
}

struct CommonOpts {
    bool debug = false;
    std::string trace_out;
    std::string tool_path;
    std::string scenario_dir;
    std::vector<std::string> tool_overrides;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_flag("--debug", o.debug, "Trace every send/receive/kill");
    cmd->add_option("--trace-out", o.trace_out, "Write trace lines to this file instead of stdout");
    cmd->add_option("--tool-path", o.tool_path, "Directory containing the stub tool executable")
        ->envname("TCA_TOOLPATH");
    cmd->add_option("--scenario-dir", o.scenario_dir, "Directory of per-tool scenario files");
    cmd->add_option("--tool", o.tool_overrides,
                    "Override one tool command: <name>=<command and args>")
        ->take_all();
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> words;
    std::string w;
    while (is >> w) words.push_back(w);
    return words;
}

// "--tool name=cmd arg..." entries, split into argv vectors.
std::map<std::string, std::vector<std::string>> parse_overrides(
    const std::vector<std::string>& overrides) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& entry : overrides) {
        auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw CLI::ValidationError("--tool", "expected <name>=<command...>: " + entry);
        auto words = split_words(entry.substr(eq + 1));
        if (words.empty())
            throw CLI::ValidationError("--tool", "empty command in: " + entry);
        out[entry.substr(0, eq)] = std::move(words);
    }
    return out;
}

std::string stub_path(const CommonOpts& o) {
    fs::path dir = o.tool_path.empty() ? self_dir() : fs::path(o.tool_path);
    return (dir / "tca-stub").string();
}

// Trace sink plumbing: file when --trace-out is given, stdout otherwise.
struct TraceSink {
    std::ofstream file;

    int open_into(tca::Runtime& rt, const CommonOpts& o) {
        rt.set_debug(o.debug);
        if (o.trace_out.empty()) {
            rt.set_trace_sink(&std::cout);
            return 0;
        }
        file.open(o.trace_out);
        if (!file) {
            std::cerr << "tca: cannot open trace output '" << o.trace_out << "'\n";
            return 1;
        }
        rt.set_trace_sink(&file);
        return 0;
    }
};

int exit_code(const tca::RunResult& r) {
    if (r.status == tca::RunStatus::Aborted) {
        for (const auto& d : r.diagnostics) std::cerr << "tca: " << d << '\n';
        return 2;
    }
    return 0;
}

// Default ping-pong scenarios: three message rounds, then quit.
void write_pingpong_scenarios(const fs::path& dir, int rounds) {
    std::ofstream t1(dir / "tool1.tca");
    t1 << "mode script\n";
    t1 << "start send snd-event(message)\n";
    for (int i = 1; i < rounds; ++i)
        t1 << "on ^snd-ack-event\\(message\\)$ send snd-event(message)\n";
    t1 << "on ^snd-ack-event\\(message\\)$ send snd-event(quit)\n";
    t1 << "on ^quit$ exit\n";

    std::ofstream t2(dir / "tool2.tca");
    t2 << "mode script\n";
    for (int i = 0; i < rounds; ++i)
        t2 << "on ^snd-eval\\(message\\)$ send snd-value(ack)\n";
}

int run_pingpong_cmd(const CommonOpts& o) {
    tca::Runtime rt;
    TraceSink sink;
    if (int rc = sink.open_into(rt, o)) return rc;

    fs::path scen_dir;
    fs::path tmp;
    if (!o.scenario_dir.empty()) {
        scen_dir = o.scenario_dir;
    } else {
        tmp = fs::temp_directory_path() / ("tca-pingpong-" + std::to_string(::getpid()));
        fs::create_directories(tmp);
        write_pingpong_scenarios(tmp, 3);
        scen_dir = tmp;
    }

    auto overrides = parse_overrides(o.tool_overrides);
    auto stub = stub_path(o);
    std::vector<std::string> tool1 = {stub, "--scenario", (scen_dir / "tool1.tca").string()};
    std::vector<std::string> tool2 = {stub, "--scenario", (scen_dir / "tool2.tca").string()};
    if (auto it = overrides.find("tool1"); it != overrides.end()) tool1 = it->second;
    if (auto it = overrides.find("tool2"); it != overrides.end()) tool2 = it->second;

    auto report = tca::run_pingpong(rt, tool1, tool2);
    if (!tmp.empty()) {
        std::error_code ec;
        fs::remove_all(tmp, ec);
    }
    return exit_code(report.result);
}

int run_simulator_cmd(const CommonOpts& o) {
    tca::Runtime rt;
    TraceSink sink;
    if (int rc = sink.open_into(rt, o)) return rc;

    auto overrides = parse_overrides(o.tool_overrides);
    if (o.scenario_dir.empty() && overrides.size() < tca::sim::tool_names().size()) {
        std::cerr << "tca: run-simulator needs --scenario-dir (or a --tool override per tool)\n";
        return 1;
    }

    tca::sim::SimulatorConfig cfg;
    if (!o.scenario_dir.empty()) cfg = tca::sim::stub_config(stub_path(o), o.scenario_dir);
    for (auto& [name, cmd] : overrides) cfg.tool_commands[name] = cmd;

    return exit_code(tca::sim::run_simulator(rt, cfg));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tca: tool coordination over rendezvous channels and line-framed stdio tools"};
    app.require_subcommand(1);

    CommonOpts pp_opts;
    auto* pp = app.add_subcommand("run-pingpong", "Run the two-tool ping-pong application");
    add_common(pp, pp_opts);

    CommonOpts sim_opts;
    auto* sim = app.add_subcommand("run-simulator", "Run the eight-process simulator topology");
    add_common(sim, sim_opts);

    std::string stub_scenario, stub_log;
    std::vector<std::string> stub_args;
    auto* stub = app.add_subcommand("stub", "Run a scenario-driven stub tool on stdin/stdout");
    stub->add_option("--scenario", stub_scenario, "Scenario file")->required();
    stub->add_option("--log", stub_log, "Record wire traffic (in/out lines) to this file");
    stub->add_option("args", stub_args, "Arguments exposed to the scenario as $ARGn");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11's exit() prints help/errors; normalize failures to status 1.
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (pp->parsed()) return run_pingpong_cmd(pp_opts);
        if (sim->parsed()) return run_simulator_cmd(sim_opts);
        if (stub->parsed()) return tca::stub::stub_main(stub_scenario, stub_log, stub_args);
    } catch (const std::exception& e) {
        std::cerr << "tca: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
