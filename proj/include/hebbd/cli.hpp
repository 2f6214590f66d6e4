#pragma once

namespace hebbd::cli {

// Entry point of the hebbd tool. Returns 0 on success, 1 on runtime failure
// and 2 on a usage error.
int run_command(int argc, char** argv);

}  // namespace hebbd::cli
