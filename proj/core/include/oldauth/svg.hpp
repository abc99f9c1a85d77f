#pragma once

#include "oldauth/geometry.hpp"

#include <span>
#include <string>
#include <string_view>

namespace oldauth {

// SVG 1.1 drawing of polygons in [0, 2^W)^2 on a 1024x1024 canvas, y axis
// pointing up. One <path> element per non-empty polygon; degenerate ones are
// drawn as hairlines.
std::string render_svg(std::span<const ConvexPolygon> polygons, int half_width_bits,
                       std::string_view title);

}  // namespace oldauth
