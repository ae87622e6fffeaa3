#pragma once

#include <ostream>

namespace mahler::lab {

/// Runs one mahler_lab command. Returns 0 on success, 1 on usage errors and
/// 2 when a checked mathematical assertion fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mahler::lab
