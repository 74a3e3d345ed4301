#pragma once
// Subcommand dispatch for the command-line tool.
//
// Exit codes: 0 all checks pass, 1 checks ran and some failed, 2 input or
// usage error. A report document is emitted in every case.

#include <ostream>
#include <string>
#include <vector>

namespace cvforge {

struct CommandResult {
  int exit_code = 0;
  std::string report;       // the document, in the requested format
  std::string report_path;  // empty: standard output
  std::string diagnostics;  // help text or parse messages for stderr
};

// args excludes the program name.
CommandResult run_command(const std::vector<std::string>& args);

// Runs the command and writes the report to --report or to out.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvforge
