#pragma once

#include <string>
#include <vector>

namespace scanforge {

// Full command-line interface. `args` excludes the program name.
// Exit codes: 0 success, 1 usage error, 2 data error.
int dispatch(const std::vector<std::string>& args);

}  // namespace scanforge
