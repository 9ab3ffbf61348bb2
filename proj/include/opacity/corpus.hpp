#pragma once

#include "opacity/net.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace opacity {

inline constexpr std::array<std::string_view, 5> corpus_names{"br", "fog", "cpr", "cpub", "app"};

/// $OPACITY_CORPUS_DIR if set, else the corpus directory of the source tree.
std::filesystem::path corpus_dir();
std::filesystem::path corpus_path(std::string_view name);

/// The five case-study services, checked against their documented
/// alphabets and secret counts. Throws PackagingError on any mismatch or
/// unreadable file.
std::map<std::string, NetModel, std::less<>> load_corpus();

} // namespace opacity
