#include "log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include <cstdlib>
#include <mutex>

namespace lqd {

bool set_log_level(const std::string &level)
{
    if (level == "off")
        spdlog::set_level(spdlog::level::off);
    else if (level == "info")
        spdlog::set_level(spdlog::level::info);
    else if (level == "debug")
        spdlog::set_level(spdlog::level::debug);
    else
        return false;
    return true;
}

void configure_logging()
{
    static std::once_flag once;
    std::call_once(once, [] {
        auto logger = spdlog::stderr_color_mt("loewner-qd");
        logger->set_pattern("[%l] %v");
        spdlog::set_default_logger(logger);
        const char *env = std::getenv("LOEWNER_QD_LOG");
        if (!env || !set_log_level(env))
            spdlog::set_level(spdlog::level::off);
    });
}

} // namespace lqd
