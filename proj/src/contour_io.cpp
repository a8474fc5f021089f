#include <array>
#include <charconv>
#include <limits>
#include <map>
#include <ostream>

#include <json.hpp>

#include "phonosim/density.hpp"

namespace phonosim {

void write_contours_json(std::ostream& out, const std::vector<ContourSet<double>>& contours) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& set : contours) {
    nlohmann::ordered_json lines = nlohmann::ordered_json::array();
    for (const auto& line : set.polylines) {
      nlohmann::ordered_json pts = nlohmann::ordered_json::array();
      for (const auto& p : line) pts.push_back({p.x(), p.y()});
      lines.push_back(std::move(pts));
    }
    nlohmann::ordered_json obj;
    obj["family"] = set.family;
    obj["level"] = set.level;
    obj["below_level"] = set.below_level;
    obj["polylines"] = std::move(lines);
    doc.push_back(std::move(obj));
  }
  out << doc.dump(1) << '\n';
}

namespace {

std::string fixed3(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 3);
  std::string s(buf.data(), ec == std::errc{} ? end : buf.data());
  return s == "-0.000" ? "0.000" : s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_contours_svg(std::ostream& out, const std::vector<LabeledPoint>& points,
                        const std::vector<ContourSet<double>>& contours) {
  constexpr double kSize = 800.0;
  constexpr double kMargin = 40.0;

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  const auto extend = [&](double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  for (const auto& p : points) extend(p.x, p.y);
  for (const auto& set : contours) {
    for (const auto& line : set.polylines) {
      for (const auto& v : line) extend(v.x(), v.y());
    }
  }
  if (!(x_min <= x_max)) x_min = x_max = y_min = y_max = 0.0;
  const double span = std::max({x_max - x_min, y_max - y_min, 1e-12});
  const double scale = (kSize - 2 * kMargin) / span;
  const auto px = [&](double x) { return kMargin + (x - x_min) * scale; };
  const auto sx = [&](double x) { return fixed3(px(x)); };
  const auto sy = [&](double y) { return fixed3(kSize - kMargin - (y - y_min) * scale); };

  std::map<std::string, std::string> colors;
  for (const auto& p : points) colors.emplace(p.family, "");
  for (const auto& set : contours) colors.emplace(set.family, "");
  std::size_t next = 0;
  for (auto& [family, color] : colors) color = kPalette[next++ % kPalette.size()];

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& set : contours) {
    const auto& color = colors[set.family];
    for (const auto& line : set.polylines) {
      if (line.empty()) continue;
      out << "<path class=\"contour\" data-family=\"" << xml_escape(set.family) << "\" fill=\""
          << (is_closed(line) ? color : "none") << "\" fill-opacity=\"0.15\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" d=\"M";
      for (std::size_t i = 0; i < line.size(); ++i) {
        out << (i ? " L" : "") << sx(line[i].x()) << ',' << sy(line[i].y());
      }
      out << (is_closed(line) ? " Z" : "") << "\"/>\n";
    }
  }
  for (const auto& p : points) {
    const auto& color = colors[p.family];
    out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"4\" fill=\"" << color
        << "\"><title>" << xml_escape(p.id) << " (" << xml_escape(p.family) << ")</title></circle>\n";
    out << "<text x=\"" << fixed3(px(p.x) + 6) << "\" y=\"" << sy(p.y)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << xml_escape(p.id) << "</text>\n";
  }
  double legend_y = 20;
  for (const auto& [family, color] : colors) {
    out << "<rect x=\"10\" y=\"" << fixed3(legend_y - 9) << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/><text x=\"26\" y=\"" << fixed3(legend_y)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << xml_escape(family) << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

}  // namespace phonosim
