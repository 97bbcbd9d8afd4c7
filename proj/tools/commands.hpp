#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace tzone::cli {

/// Process exit codes.
enum ExitCode : int { ok = 0, validation_error = 2, numerical_error = 3, io_error = 4 };

/// Names accepted as the first positional argument.
const std::vector<std::string>& command_names();

/// Renders the output of one subcommand. Deterministic in (scenario, seed);
/// the thread count in sc.sim.threads never changes the text.
std::string run_command(const std::string& name, const Scenario& sc, Format format);

/// Writes text to path through a temporary file and an atomic rename.
void write_atomic(const std::string& path, const std::string& text);

/// Full command-line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tzone::cli
