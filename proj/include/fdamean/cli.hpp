#pragma once

#include <string>
#include <vector>

namespace fdamean {

//! Command-line entry point; argv-style arguments without the program name.
//! Returns 0 on success, 1 on numerical failure, 2 on usage or input errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace fdamean
