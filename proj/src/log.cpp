#include "warpopt/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace warpopt {

void init_logging_from_env() {
  static const auto logger = [] {
    auto l = spdlog::stderr_color_mt("warpopt");
    spdlog::set_default_logger(l);
    return l;
  }();
  const char* env = std::getenv("WARPOPT_LOG");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (env && *env) {
    level = spdlog::level::from_str(env);
    // from_str maps anything unknown to off; keep warnings in that case
    if (level == spdlog::level::off && std::string(env) != "off") level = spdlog::level::warn;
  }
  logger->set_level(level);
}

}  // namespace warpopt
