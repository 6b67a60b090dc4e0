#pragma once

#include <ostream>

namespace podvs {

/// Entry point of the podvs tool. Returns 0 on success, 2 on a usage error
/// and 1 when the inputs cannot be processed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace podvs
