#pragma once

#include <string>
#include <vector>

namespace pmtm::cli {

/// Entry point shared by the executable and the tests. Returns 0 on
/// success, 1 for input errors (bad flags, malformed files), 2 for
/// numerical failures.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace pmtm::cli
