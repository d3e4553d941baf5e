// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/scenario.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "tca/term.hpp"

namespace tca::stub {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits off the first whitespace-delimited token.
std::pair<std::string_view, std::string_view> split_token(std::string_view s) {
    s = trim(s);
    std::size_t i = 0;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return {s.substr(0, i), trim(s.substr(i))};
}

// Parses "send <line>" / "exit" and appends to rule. rest must start with
// an action keyword; returns false if it does not.
bool parse_actions(std::string_view rest, Rule& rule, int line_no) {
    auto [word, tail] = split_token(rest);
    if (word == "send") {
        if (tail.empty()) throw ScenarioError(line_no, "empty send line");
        rule.actions.push_back({Action::Kind::Send, std::string(tail)});
        return true;
    }
    if (word == "exit") {
        if (!tail.empty()) throw ScenarioError(line_no, "trailing text after exit");
        rule.actions.push_back({Action::Kind::Exit, {}});
        return true;
    }
    return false;
}

} // namespace

StubScenario scenario_parse(std::string_view text) {
    StubScenario scenario;
    bool mode_seen = false;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = (nl == std::string_view::npos)
                                   ? text.substr(pos)
                                   : text.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        auto [word, rest] = split_token(line);
        if (word == "mode") {
            if (mode_seen) throw ScenarioError(line_no, "duplicate mode directive");
            if (rest == "script") scenario.mode = ScenarioMode::Script;
            else if (rest == "reactive") scenario.mode = ScenarioMode::Reactive;
            else throw ScenarioError(line_no, "mode must be 'script' or 'reactive'");
            mode_seen = true;
        } else if (word == "start") {
            Rule rule;
            rule.on_start = true;
            if (!rest.empty() && !parse_actions(rest, rule, line_no))
                throw ScenarioError(line_no, "expected an action after 'start'");
            scenario.rules.push_back(std::move(rule));
        } else if (word == "on") {
            auto [pattern, tail] = split_token(rest);
            if (pattern.empty()) throw ScenarioError(line_no, "missing pattern after 'on'");
            if (!PatternTable::is_anchored(pattern))
                throw ScenarioError(line_no, "pattern must be anchored at both ends");
            Rule rule;
            rule.pattern_source = std::string(pattern);
            try {
                rule.pattern = std::regex(rule.pattern_source);
            } catch (const std::regex_error& e) {
                throw ScenarioError(line_no, std::string("bad pattern: ") + e.what());
            }
            if (!tail.empty() && !parse_actions(tail, rule, line_no))
                throw ScenarioError(line_no, "expected an action after the pattern");
            scenario.rules.push_back(std::move(rule));
        } else if (word == "send" || word == "exit") {
            if (scenario.rules.empty())
                throw ScenarioError(line_no, "action before any rule");
            parse_actions(line, scenario.rules.back(), line_no);
        } else {
            throw ScenarioError(line_no, "unknown directive '" + std::string(word) + "'");
        }
    }

    if (!mode_seen) throw ScenarioError(1, "missing mode directive");
    return scenario;
}

std::string substitute(const std::string& text, const std::vector<std::string>& captures,
                       const std::vector<std::string>& args) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '$') {
            out += text[i++];
            continue;
        }
        std::size_t j = i + 1;
        bool is_arg = text.compare(j, 3, "ARG") == 0;
        if (is_arg) j += 3;
        std::size_t digits_start = j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == digits_start) { // plain '$'
            out += text[i++];
            continue;
        }
        const auto& pool = is_arg ? args : captures;
        if (j - digits_start <= 4) { // longer runs cannot name a real group
            std::size_t n = std::stoul(text.substr(digits_start, j - digits_start));
            if (n >= 1 && n <= pool.size()) out += pool[n - 1];
        }
        i = j;
    }
    return out;
}

namespace {

struct LineIo {
    std::istream& in;
    std::ostream& out;
    std::ostream* log;

    // Returns false on end of input. A trailing unterminated fragment is
    // treated as a line (the child is about to act on whatever it got).
    bool read_line(std::string& line) {
        if (!std::getline(in, line)) return false;
        if (log) *log << "in " << line << '\n' << std::flush;
        return true;
    }

    void write_line(const std::string& line) {
        out << line << '\n' << std::flush;
        if (log) *log << "out " << line << '\n' << std::flush;
    }
};

// Runs a rule's actions; returns true if an exit action fired.
bool run_actions(const Rule& rule, LineIo& io, const std::vector<std::string>& captures,
                 const std::vector<std::string>& args) {
    for (const auto& action : rule.actions) {
        if (action.kind == Action::Kind::Exit) return true;
        io.write_line(substitute(action.text, captures, args));
    }
    return false;
}

} // namespace

int run_scenario(const StubScenario& scenario, std::istream& in, std::ostream& out,
                 std::ostream* log, std::ostream& diag, const std::vector<std::string>& args) {
    LineIo io{in, out, log};
    const std::vector<std::string> no_captures;

    if (scenario.mode == ScenarioMode::Script) {
        for (const auto& rule : scenario.rules) {
            std::vector<std::string> captures;
            if (!rule.on_start) {
                std::string line;
                if (!io.read_line(line)) {
                    diag << "stub: conformance violation: expected " << rule.pattern_source
                         << ", got end of input\n";
                    return kStubViolation;
                }
                std::smatch sm;
                if (!std::regex_match(line, sm, rule.pattern)) {
                    diag << "stub: conformance violation: expected " << rule.pattern_source
                         << ", received '" << line << "'\n";
                    return kStubViolation;
                }
                for (std::size_t i = 1; i < sm.size(); ++i) captures.push_back(sm[i].str());
            }
            if (run_actions(rule, io, captures, args)) return kStubOk;
        }
        return kStubOk; // all rules consumed
    }

    // reactive: fire start rules once, then match every input line top-down.
    for (const auto& rule : scenario.rules)
        if (rule.on_start && run_actions(rule, io, no_captures, args)) return kStubOk;

    std::string line;
    while (io.read_line(line)) {
        for (const auto& rule : scenario.rules) {
            if (rule.on_start) continue;
            std::smatch sm;
            if (!std::regex_match(line, sm, rule.pattern)) continue;
            std::vector<std::string> captures;
            for (std::size_t i = 1; i < sm.size(); ++i) captures.push_back(sm[i].str());
            if (run_actions(rule, io, captures, args)) return kStubOk;
            break; // first match fires; no match is ignored
        }
    }
    return kStubOk;
}

int stub_main(const std::string& scenario_path, const std::string& log_path,
              const std::vector<std::string>& args) {
    std::ifstream f(scenario_path);
    if (!f) {
        std::cerr << "stub: cannot open scenario '" << scenario_path << "'\n";
        return kStubUsage;
    }
    std::stringstream buf;
    buf << f.rdbuf();

    StubScenario scenario;
    try {
        scenario = scenario_parse(buf.str());
    } catch (const ScenarioError& e) {
        std::cerr << "stub: " << scenario_path << ": " << e.what() << '\n';
        return kStubUsage;
    }

    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path);
        if (!log) {
            std::cerr << "stub: cannot open log '" << log_path << "'\n";
            return kStubUsage;
        }
    }

    int status = run_scenario(scenario, std::cin, std::cout,
                              log.is_open() ? &log : nullptr, std::cerr, args);

    // Close stdout before exiting so the coordinator's reader sees EOF the
    // moment the script is done, not whenever process teardown finishes.
    std::cout.flush();
    ::close(STDOUT_FILENO);
    return status;
}

} // namespace tca::stub
