#pragma once

namespace towbombe {

// Entry point for the towbombe command line tool. Returns a process exit code.
int cli_main(int argc, const char* const* argv);

}  // namespace towbombe
