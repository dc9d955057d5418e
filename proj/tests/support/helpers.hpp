#pragma once
// Shared test plumbing: profile loading and small fixture builders.

#include <filesystem>
#include <string>

#include "stgen/st/dialect.hpp"

namespace test_support {

inline std::filesystem::path source_dir() { return STGEN_SOURCE_DIR; }
inline std::filesystem::path fixtures_dir() { return STGEN_FIXTURES_DIR; }

inline stgen::st::DialectProfile siemens_profile() {
    static stgen::st::DialectProfile p =
        stgen::st::load_profile(source_dir() / "profiles", "siemens");
    return p;
}

inline stgen::st::DialectProfile codesys_profile() {
    static stgen::st::DialectProfile p =
        stgen::st::load_profile(source_dir() / "profiles", "codesys");
    return p;
}

}  // namespace test_support
