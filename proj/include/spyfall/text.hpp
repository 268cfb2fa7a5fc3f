#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace spyfall::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Replaces every occurrence of `from` in `s`. Returns the number of replacements.
int replace_all(std::string& s, std::string_view from, std::string_view to);

bool contains_ci(std::string_view haystack, std::string_view needle);

// Whole-phrase, case-insensitive occurrence check: `phrase` must not be
// flanked by alphanumeric characters on either side.
bool contains_phrase_ci(std::string_view haystack, std::string_view phrase);

// FNV-1a 64-bit over the raw bytes.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex64(std::uint64_t v);

// Reads the whole file as bytes; throws LoadError naming the path.
std::string read_file(const std::filesystem::path& path);

// Microseconds since the Unix epoch <-> "2023-06-07T12:26:12.493510Z".
std::string format_iso8601_us(std::int64_t micros);
std::int64_t parse_iso8601_us(const std::string& s);

// Accepts the legacy "datetime.datetime(2023, 6, 7, 12, 26, 12, 493510)"
// form as well as ISO-8601; throws LoadError otherwise.
std::int64_t parse_timestamp(const std::string& s);

} // namespace spyfall::text
