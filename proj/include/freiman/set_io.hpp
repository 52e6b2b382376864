#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "freiman/set_engine.hpp"

namespace freiman {

/// Reads "group <kind> [n=] [p=] [m=]" followed by one element per line; '#' starts a comment.
/// When `expected` is given it must match the header, or stands in for a missing header.
FiniteSet parse_set_text(std::string_view text, std::optional<GroupSpec> expected = {});
FiniteSet read_set_file(const std::filesystem::path& path, std::optional<GroupSpec> expected = {});

/// Canonical form: header line, then elements in sorted order.
std::string format_set_text(const FiniteSet& set);
void write_set_file(const std::filesystem::path& path, const FiniteSet& set);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace freiman
