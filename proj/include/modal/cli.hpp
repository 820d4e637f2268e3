#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modal {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_data = 2 };

//! Entry point of the `modal` tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

//! Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

} // namespace modal
