//
// Command-line front end. Exit codes: 0 success, 1 operational error,
// 2 usage error.
//

#pragma once

namespace cueharvest {

int run_cli(int argc, const char* const* argv);

}  // namespace cueharvest
