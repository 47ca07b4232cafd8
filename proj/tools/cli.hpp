#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace clonelab::cli {

/// Exit codes of run().
enum Exit : int { ok = 0, counterexample = 1, usage = 2 };

/// Parses `args` (without the program name) and executes one subcommand.
/// Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Fixture directory used when --fixtures is not given.
std::string default_fixtures_dir();

}  // namespace clonelab::cli
