#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phonosim {

inline constexpr double kDefaultLowResourceHours = 15.0;

struct LanguageRecord {
  std::string code;
  std::string name;
  std::string family;
  std::optional<std::string> branch;
  double recording_hours = 0.0;
};

// Language metadata keyed by code. Immutable after construction; records are
// kept sorted by code so iteration order never depends on input order.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<LanguageRecord> records,
                    double low_resource_threshold_hours = kDefaultLowResourceHours);

  const std::vector<LanguageRecord>& languages() const noexcept { return languages_; }
  double low_resource_threshold_hours() const noexcept { return threshold_; }
  std::size_t size() const noexcept { return languages_.size(); }
  bool empty() const noexcept { return languages_.empty(); }

  const LanguageRecord* find(std::string_view code) const;
  // Throws phonosim::Error for unknown codes.
  const LanguageRecord& at(std::string_view code) const;

  // Strictly below the threshold.
  bool is_low_resource(std::string_view code) const;

  std::vector<LanguageRecord> family_members(
      std::string_view family, std::optional<std::string_view> exclude = std::nullopt) const;

 private:
  std::vector<LanguageRecord> languages_;
  double threshold_ = kDefaultLowResourceHours;
};

// Header `code,name,family,branch,hours`. A completely empty file yields an
// empty registry.
Registry parse_registry(std::istream& in, const std::string& source = "<registry>",
                        double low_resource_threshold_hours = kDefaultLowResourceHours);
Registry load_registry(const std::filesystem::path& path,
                       double low_resource_threshold_hours = kDefaultLowResourceHours);

void write_registry(std::ostream& out, const Registry& registry);

}  // namespace phonosim
