#pragma once

// Constellation files:
//   { "space": "euclidean" | "hyperbolic-half" | "hyperbolic-ball",
//     "dimension": n,
//     "signals": [[x1, ..., xn], ...],
//     "neighbors": [[j, ...], ...],          (optional)
//     "geometrically_uniform": true | false }
// Doubles are written in shortest round-trip form; loading re-validates
// every constellation invariant.

#include "hypgauss/codes.hpp"
#include "hypgauss/error.hpp"

#include "json.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace hypgauss {

inline Space parse_space(const std::string& s) {
    if (s == "euclidean") return Space::Euclidean;
    if (s == "hyperbolic-half") return Space::HyperbolicHalf;
    if (s == "hyperbolic-ball") return Space::HyperbolicBall;
    detail::fail(ErrorKind::InvalidInput, "unknown space '" + s + "'");
}

inline nlohmann::json to_json(const Constellation& c) {
    nlohmann::json j;
    j["space"] = to_string(c.space());
    j["dimension"] = c.dim();
    j["signals"] = c.signals();
    if (c.neighbors()) j["neighbors"] = *c.neighbors();
    j["geometrically_uniform"] = c.geometrically_uniform();
    return j;
}

inline Constellation constellation_from_json(const nlohmann::json& j) {
    try {
        detail::require(j.is_object(), "constellation must be a JSON object");
        const Space space = parse_space(j.at("space").get<std::string>());
        const auto dim = j.at("dimension").get<std::size_t>();
        auto signals = j.at("signals").get<std::vector<Constellation::Point>>();
        for (const auto& s : signals) detail::require(s.size() == dim, "signal length differs from 'dimension'");
        std::optional<NeighborLists> neighbors;
        if (j.contains("neighbors") && !j.at("neighbors").is_null())
            neighbors = j.at("neighbors").get<NeighborLists>();
        const bool gu = j.value("geometrically_uniform", false);
        return Constellation(space, std::move(signals), std::move(neighbors), gu);
    } catch (const nlohmann::json::exception& e) {
        detail::fail(ErrorKind::InvalidInput, std::string("malformed constellation: ") + e.what());
    }
}

inline Constellation parse_constellation(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        detail::fail(ErrorKind::InvalidInput, std::string("constellation is not valid JSON: ") + e.what());
    }
    return constellation_from_json(j);
}

inline Constellation load_constellation(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::fail(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_constellation(ss.str());
}

inline void save_constellation(const Constellation& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) detail::fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << to_json(c).dump(2) << '\n';
    if (!out) detail::fail(ErrorKind::Io, "write to '" + path + "' failed");
}

} // namespace hypgauss
