#include "phonosim/projection.hpp"

#include <array>
#include <istream>
#include <ostream>

#include "phonosim/text_io.hpp"

namespace phonosim {

void write_coordinates_csv(std::ostream& out, const Projection2D& projection,
                           const std::map<std::string, std::string>* families) {
  if (projection.coords.cols() != 2) throw Error("coordinate export expects two components");
  std::vector<std::string> header{"id", "x", "y", "ev1", "ev2"};
  if (families) header.emplace_back("family");
  out << join_csv(header) << '\n';
  for (std::size_t i = 0; i < projection.ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    std::vector<std::string> row{projection.ids[i], format_double(projection.coords(r, 0)),
                                 format_double(projection.coords(r, 1)),
                                 format_double(projection.explained_variance[0]),
                                 format_double(projection.explained_variance[1])};
    if (families) {
      const auto it = families->find(projection.ids[i]);
      row.push_back(it == families->end() ? std::string{} : it->second);
    }
    out << join_csv(row) << '\n';
  }
}

Projection2D parse_coordinates_csv(std::istream& in, const std::string& source) {
  const auto lines = read_lines(in);
  Projection2D p;
  std::vector<std::array<double, 2>> xy;
  bool header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = parse_csv_line(lines[i], source, i + 1);
    if (!header) {
      if (fields.size() < 5 || fields[0] != "id" || fields[1] != "x" || fields[2] != "y" ||
          fields[3] != "ev1" || fields[4] != "ev2") {
        throw ParseError(source, i + 1, "expected header 'id,x,y,ev1,ev2'");
      }
      header = true;
      continue;
    }
    if (fields.size() < 5) throw ParseError(source, i + 1, "expected at least 5 fields");
    p.ids.push_back(fields[0]);
    xy.push_back({parse_double(fields[1], source, i + 1), parse_double(fields[2], source, i + 1)});
    if (p.ids.size() == 1) {
      p.explained_variance = Eigen::Vector2d(parse_double(fields[3], source, i + 1),
                                             parse_double(fields[4], source, i + 1));
    }
  }
  if (!header) throw ParseError(source, 1, "missing header");
  p.coords.resize(static_cast<Eigen::Index>(xy.size()), 2);
  for (std::size_t i = 0; i < xy.size(); ++i) {
    p.coords(static_cast<Eigen::Index>(i), 0) = xy[i][0];
    p.coords(static_cast<Eigen::Index>(i), 1) = xy[i][1];
  }
  if (p.explained_variance.size() == 0) p.explained_variance = Eigen::Vector2d::Zero();
  return p;
}

}  // namespace phonosim
