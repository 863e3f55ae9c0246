#pragma once

namespace warpopt {

/// Sets the spdlog level from WARPOPT_LOG (trace, debug, info, warn, error,
/// critical, off). Unset means warn.
void init_logging_from_env();

}  // namespace warpopt
