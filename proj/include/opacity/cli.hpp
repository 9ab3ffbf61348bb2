#pragma once

#include "opacity/checker.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>

namespace opacity {

enum class Command { check, enforce, export_dot, oracle, validate };
enum class Format { json, text };

std::optional<Command> parse_command(std::string_view s);

struct RunConfig {
    Command command = Command::check;
    std::filesystem::path model_path;
    Variant variant = Variant::simple;
    std::uint32_t k = 1;  // ignored for simple opacity
    std::optional<std::uint32_t> oracle_depth;
    std::optional<std::filesystem::path> output_path;
    Format format = Format::json;
};

/// $OPACITY_OUT_DIR, or the working directory.
std::filesystem::path default_output_dir();

/// Runs one command. Exit codes: 0 opaque / success, 1 not opaque / already
/// opaque / WF violations, 2 any parse, model or enforcement error (reported
/// on `err`).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace opacity
