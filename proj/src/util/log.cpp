#include "delayrep/util/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <optional>

namespace delayrep::logging {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

std::optional<Level>& override_level() {
    static std::optional<Level> l;
    return l;
}

Level from_env() {
    const char* raw = std::getenv("DELAYREP_LOG");
    if (!raw) return Level::Error;
    const std::string v(raw);
    if (v == "debug") return Level::Debug;
    if (v == "info") return Level::Info;
    return Level::Error;
}

void emit(Level at, const char* tag, const std::string& message) {
    if (static_cast<int>(at) > static_cast<int>(level())) return;
    const std::lock_guard<std::mutex> lock(sink_mutex());
    std::cerr << "delayrep " << tag << ": " << message << '\n';
}

}  // namespace

Level level() {
    static const Level env = from_env();
    return override_level().value_or(env);
}

void set_level(Level l) { override_level() = l; }

void error(const std::string& message) { emit(Level::Error, "error", message); }
void info(const std::string& message) { emit(Level::Info, "info", message); }
void debug(const std::string& message) { emit(Level::Debug, "debug", message); }

}  // namespace delayrep::logging
