#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dianet {

// Entry point behind the dianet binary; also callable in-process from tests.
// Exit codes: 0 success, 2 usage, 3 input/parse, 4 leakage,
// 5 analysis precondition.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dianet
