// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tca::stub {

// Scenario files drive the deterministic stub tool that stands in for real
// external tools. The format is line-oriented UTF-8; '#' starts a comment
// and blank lines are ignored.
//
//   mode script|reactive
//   start [action]                 rule fired without consuming input
//   on <pattern> [action]          rule matching one input line
//   send <line>                    action (inline after a trigger, or on
//   exit                           its own line, appended to the last rule)
//
// <pattern> is a single whitespace-free token holding a regular expression
// anchored at both ends; use \s for literal spaces. A rule may carry any
// number of actions, including none (a pure expectation in script mode).
// A send line may reference captures of its rule's pattern as $1..$9 and
// the stub's trailing command-line arguments as $ARG1, $ARG2, ...
//
// script mode consumes rules strictly in order; an input line that does
// not match the next rule's pattern is a conformance violation. reactive
// mode matches each input line against all rules top-down, first match
// fires, no match is ignored. In script mode the stub exits 0 once every
// rule has been consumed.

enum class ScenarioMode { Script, Reactive };

struct Action {
    enum class Kind { Send, Exit };
    Kind kind;
    std::string text; // Send payload before substitution
};

struct Rule {
    bool on_start = false;
    std::string pattern_source;
    std::regex pattern; // valid when !on_start
    std::vector<Action> actions;
};

struct StubScenario {
    ScenarioMode mode = ScenarioMode::Script;
    std::vector<Rule> rules;
};

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, const std::string& what)
        : std::runtime_error("scenario line " + std::to_string(line) + ": " + what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

StubScenario scenario_parse(std::string_view text);

// $1..$9 from captures, $ARG1.. from args; out-of-range references
// substitute the empty string, any other '$' is literal.
std::string substitute(const std::string& text, const std::vector<std::string>& captures,
                       const std::vector<std::string>& args);

// Exit statuses of the stub: 0 success, 1 usage/IO error, 2 conformance
// violation (diagnostic on diag naming the expected pattern and the
// received line).
inline constexpr int kStubOk = 0;
inline constexpr int kStubUsage = 1;
inline constexpr int kStubViolation = 2;

// Runs a scenario over the given streams. When log is non-null, every
// input line is recorded as "in <line>" and every emitted line as
// "out <line>", flushed per line. Returns the stub exit status.
int run_scenario(const StubScenario& scenario, std::istream& in, std::ostream& out,
                 std::ostream* log, std::ostream& diag, const std::vector<std::string>& args);

// Full stub entry point used by the stub binary and the CLI subcommand:
// loads the scenario, runs it over stdin/stdout, closes stdout before
// returning so the coordinator sees EOF as soon as the script is done.
int stub_main(const std::string& scenario_path, const std::string& log_path,
              const std::vector<std::string>& args);

} // namespace tca::stub
