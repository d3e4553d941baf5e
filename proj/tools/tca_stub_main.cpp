// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic scenario-driven stub tool: speaks the line protocol over
// stdin/stdout in place of a real external tool.
//
//   tca-stub --scenario <path> [--log <path>] [args...]
//
// Trailing arguments are exposed to the scenario as $ARG1, $ARG2, ...
// Exit: 0 success, 1 usage/IO error, 2 conformance violation.

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "tca/scenario.hpp"

int main(int argc, char** argv) {
    std::string scenario_path;
    std::string log_path;
    std::vector<std::string> args;

    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--scenario") == 0 && i + 1 < argc) {
            scenario_path = argv[++i];
        } else if (std::strcmp(argv[i], "--log") == 0 && i + 1 < argc) {
            log_path = argv[++i];
        } else if (std::strcmp(argv[i], "--scenario") == 0 || std::strcmp(argv[i], "--log") == 0) {
            std::cerr << "tca-stub: missing value for " << argv[i] << '\n';
            return tca::stub::kStubUsage;
        } else {
            args.emplace_back(argv[i]);
        }
    }
    if (scenario_path.empty()) {
        std::cerr << "usage: tca-stub --scenario <path> [--log <path>] [args...]\n";
        return tca::stub::kStubUsage;
    }
    return tca::stub::stub_main(scenario_path, log_path, args);
}
