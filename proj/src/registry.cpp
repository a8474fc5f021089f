#include "phonosim/registry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "phonosim/error.hpp"
#include "phonosim/text_io.hpp"

namespace phonosim {

Registry::Registry(std::vector<LanguageRecord> records, double low_resource_threshold_hours)
    : languages_(std::move(records)), threshold_(low_resource_threshold_hours) {
  if (!(threshold_ >= 0.0) || !std::isfinite(threshold_)) {
    throw Error("low-resource threshold must be a nonnegative number");
  }
  for (const auto& rec : languages_) {
    if (rec.code.empty()) throw Error("language code must not be empty");
    if (!(rec.recording_hours >= 0.0) || !std::isfinite(rec.recording_hours)) {
      throw Error("language '" + rec.code + "' has negative or non-finite recording hours");
    }
  }
  std::sort(languages_.begin(), languages_.end(),
            [](const auto& a, const auto& b) { return a.code < b.code; });
  const auto dup = std::adjacent_find(languages_.begin(), languages_.end(),
                                      [](const auto& a, const auto& b) { return a.code == b.code; });
  if (dup != languages_.end()) throw Error("duplicate language code '" + dup->code + "'");
}

const LanguageRecord* Registry::find(std::string_view code) const {
  const auto it = std::lower_bound(languages_.begin(), languages_.end(), code,
                                   [](const auto& rec, std::string_view c) { return rec.code < c; });
  if (it == languages_.end() || it->code != code) return nullptr;
  return &*it;
}

const LanguageRecord& Registry::at(std::string_view code) const {
  if (const auto* rec = find(code)) return *rec;
  throw Error("unknown language code '" + std::string(code) + "'");
}

bool Registry::is_low_resource(std::string_view code) const {
  return at(code).recording_hours < threshold_;
}

std::vector<LanguageRecord> Registry::family_members(
    std::string_view family, std::optional<std::string_view> exclude) const {
  std::vector<LanguageRecord> out;
  for (const auto& rec : languages_) {
    if (rec.family != family) continue;
    if (exclude && rec.code == *exclude) continue;
    out.push_back(rec);
  }
  return out;
}

Registry parse_registry(std::istream& in, const std::string& source,
                        double low_resource_threshold_hours) {
  const auto lines = read_lines(in);
  std::vector<LanguageRecord> records;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    auto fields = parse_csv_line(lines[i], source, line_no);
    for (auto& f : fields) f = std::string(trim(f));
    if (!header_seen) {
      const std::vector<std::string> expected{"code", "name", "family", "branch", "hours"};
      if (fields != expected) {
        throw ParseError(source, line_no, "expected header 'code,name,family,branch,hours'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw ParseError(source, line_no,
                       "expected 5 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(source, line_no, "empty language code");
    LanguageRecord rec;
    rec.code = fields[0];
    rec.name = fields[1];
    rec.family = fields[2];
    if (!fields[3].empty()) rec.branch = fields[3];
    rec.recording_hours = parse_double(fields[4], source, line_no);
    if (rec.recording_hours < 0.0) {
      throw ParseError(source, line_no, "recording hours must be nonnegative");
    }
    const auto clash = std::find_if(records.begin(), records.end(),
                                    [&](const auto& r) { return r.code == rec.code; });
    if (clash != records.end()) {
      throw ParseError(source, line_no, "duplicate language code '" + rec.code + "'");
    }
    records.push_back(std::move(rec));
  }
  return Registry(std::move(records), low_resource_threshold_hours);
}

Registry load_registry(const std::filesystem::path& path, double low_resource_threshold_hours) {
  auto in = open_input(path);
  return parse_registry(in, path.string(), low_resource_threshold_hours);
}

void write_registry(std::ostream& out, const Registry& registry) {
  out << "code,name,family,branch,hours\n";
  for (const auto& rec : registry.languages()) {
    out << join_csv({rec.code, rec.name, rec.family, rec.branch.value_or(""),
                     format_double(rec.recording_hours)})
        << '\n';
  }
}

}  // namespace phonosim
