#include "spyfall/locations.hpp"

#include "spyfall/errors.hpp"
#include "spyfall/text.hpp"

#include <algorithm>

namespace spyfall {

std::optional<Location> Location::parse(std::string_view raw) {
    std::string canon = text::to_lower(text::trim(raw));
    auto it = std::find(kCanonicalLocations.begin(), kCanonicalLocations.end(), canon);
    if (it == kCanonicalLocations.end()) return std::nullopt;
    return Location(std::move(canon));
}

Location Location::require(std::string_view raw) {
    auto loc = parse(raw);
    if (!loc) throw ConfigError("unknown location: '" + std::string(raw) + "'");
    return *loc;
}

} // namespace spyfall
