#pragma once

#include <string>
#include <vector>

#include "weldlab/io.hpp"

namespace weldlab::cli {

/// Runs one command. argv excludes the program name; `usage` receives help or error
/// text whenever the report is a usage error (exit status 2) or help was requested.
RunReport dispatch(const std::vector<std::string>& argv, std::string* usage = nullptr);

/// dispatch plus printing: report to stdout, usage text to stderr. Returns the exit status.
int run(int argc, char** argv);

}  // namespace weldlab::cli
