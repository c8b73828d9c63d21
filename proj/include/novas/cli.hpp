#pragma once

namespace novas::cli {

/// Entry point of the `novas` tool. Returns the process exit status.
int run(int argc, char** argv);

}  // namespace novas::cli
