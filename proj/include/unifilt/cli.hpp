#pragma once

#include <string>
#include <vector>

namespace unifilt {

/// Entry point of the `unifilt` tool. Returns the process exit code.
int run_cli(int argc, char** argv);
/// Same, with arguments excluding the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace unifilt
