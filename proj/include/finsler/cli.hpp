#pragma once

#include <span>
#include <string>

namespace finsler {

// Exit codes: 0 all checks pass, 1 assertion failures, 2 usage error,
// 3 no admissible sample points.
int run_cli(std::span<const std::string> args);

}  // namespace finsler
