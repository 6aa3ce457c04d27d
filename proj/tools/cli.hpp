#pragma once

#include <iosfwd>

namespace spikeflow {

// Exit codes: 0 ok, 1 usage, 2 input error, 3 guard or budget exceeded,
// 4 invariant violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spikeflow
