#pragma once

#include <spdlog/spdlog.h>

#include <string>

namespace lqd {

// Reads LOEWNER_QD_LOG (off|info|debug) once; default off.
void configure_logging();
bool set_log_level(const std::string &level);

template <typename... Args>
void log_info(const char *fmt, Args &&...args)
{
    configure_logging();
    spdlog::info(fmt::runtime(fmt), std::forward<Args>(args)...);
}

template <typename... Args>
void log_debug(const char *fmt, Args &&...args)
{
    configure_logging();
    spdlog::debug(fmt::runtime(fmt), std::forward<Args>(args)...);
}

} // namespace lqd
