#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace spyfall {

// The 30 canonical game locations, alphabetical, stored lowercase.
inline constexpr std::array<std::string_view, 30> kCanonicalLocations = {
    "airplane",      "amusement park", "bank",         "beach",
    "carnival",      "casino",         "circus tent",  "corporate party",
    "crusader army", "day spa",        "embassy",      "hospital",
    "hotel",         "military base",  "movie studio", "nightclub",
    "ocean liner",   "passenger train","pirate ship",  "polar station",
    "police station","restaurant",     "school",       "service station",
    "space station", "submarine",      "supermarket",  "theater",
    "university",    "zoo",
};

// A canonical location name. Construct through parse()/require() so the
// lowercase-and-listed invariant always holds.
class Location {
public:
    Location() = default;

    // Lowercases and trims, then validates against the canonical list.
    static std::optional<Location> parse(std::string_view raw);
    // Same, but throws ConfigError on failure.
    static Location require(std::string_view raw);

    const std::string& name() const { return name_; }
    bool operator==(const Location& other) const = default;

private:
    explicit Location(std::string name) : name_(std::move(name)) {}
    std::string name_;
};

} // namespace spyfall
