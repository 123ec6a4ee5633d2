#pragma once

// Geometry JSON files and the built-in test geometries.
//
// Schema: {"dimension": D, "degrees": [p_1, ...], "knots": [[...], ...],
//          "control_points": nested array of shape (n_1, ..., n_D, D), i_1 slowest,
//          "weights": optional nested array of shape (n_1, ..., n_D)}

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lriga/geometry.hpp"

namespace lriga {

/// Throws ValidationError naming the offending field.
[[nodiscard]] GeometryMap parse_geometry_json(std::string_view text);
[[nodiscard]] GeometryMap parse_geometry(const std::filesystem::path& path);

[[nodiscard]] std::string geometry_to_json(const GeometryMap& geo);
void write_geometry(const std::filesystem::path& path, const GeometryMap& geo);

/// Identity map of [0,1]^3 on a single span of degree p.
[[nodiscard]] GeometryMap unit_cube(int degree);
/// Quarter of the annulus 1 <= |(x, y)| <= 2 in the first quadrant, extruded over z in [0, 1].
/// Parameters (r, theta, z); G(0, 0, 0) = (1, 0, 0). The circular direction is the rational
/// quadratic arc (weights 1, sqrt(2)/2, 1), degree-elevated to p; requires p >= 2.
[[nodiscard]] GeometryMap quarter_annulus_3d(int degree);

inline constexpr double kTwistAlpha = 0.6;
inline constexpr double kTwistKappa = 0.3;
/// G = (X + kappa Y Z, Y - a Z + 1/2, Z + a Y + 1/2) with X = 2x, Y = y - 1/2, Z = z - 1/2 and
/// a = alpha x: a [0,2] x [0,1]^2 box twisted about its long axis, with a bilinear shear.
[[nodiscard]] GeometryMap twisted_cuboid(int degree);

[[nodiscard]] const std::vector<std::string>& builtin_geometry_names();
/// Throws ValidationError for unknown names.
[[nodiscard]] GeometryMap builtin_geometry(std::string_view name, int degree);

}  // namespace lriga
