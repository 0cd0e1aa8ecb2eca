#pragma once

#include <cstdlib>
#include <filesystem>

namespace kissing {

/// Root of the shipped data assets. Override with KISSING_DATA_DIR.
inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("KISSING_DATA_DIR"); env && *env) return env;
#ifdef KISSING_DEFAULT_DATA_DIR
    return KISSING_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

} // namespace kissing
