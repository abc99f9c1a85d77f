#include "oldauth/svg.hpp"

#include <cstdio>
#include <sstream>

namespace oldauth {

namespace {

constexpr double canvas = 1024.0;

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(std::span<const ConvexPolygon> polygons, int half_width_bits,
                       std::string_view title) {
  const double scale = canvas / static_cast<double>(std::uint64_t{1} << half_width_bits);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1024\" "
        "height=\"1024\" viewBox=\"0 0 1024 1024\">\n"
     << "<title>" << escape(title) << "</title>\n"
     << "<rect x=\"0\" y=\"0\" width=\"1024\" height=\"1024\" fill=\"white\" stroke=\"black\"/>\n";
  for (const auto& poly : polygons) {
    if (poly.empty()) continue;
    os << "<path d=\"";
    char buf[64];
    bool first = true;
    for (const auto& v : poly.vertices()) {
      std::snprintf(buf, sizeof buf, "%s%.3f %.3f ", first ? "M" : "L", v.x.to_double() * scale,
                    canvas - v.y.to_double() * scale);
      os << buf;
      first = false;
    }
    os << "Z\" fill=\"black\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace oldauth
