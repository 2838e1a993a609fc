#pragma once

#include <string>
#include <vector>

namespace folcyc::cli {

/// Entry point of the batch front-end. Returns the process exit status:
/// 0 on success, 1 on certified-empty or escape-absent outcomes, 2 on errors.
int run(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace folcyc::cli
