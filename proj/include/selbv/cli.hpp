#pragma once

#include <iosfwd>

namespace selbv::cli {

/// Entry point for the `selbv` tool. Returns 0 on success, 1 when a
/// verification or checksum check fails and 2 on usage errors.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selbv::cli
