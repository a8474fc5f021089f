#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "phonosim/projection.hpp"

namespace phonosim {

// Binary typological features, one row per language. Missing cells are -1.
struct FeatureMatrix {
  using Values = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

  static constexpr std::int8_t kMissing = -1;

  std::vector<std::string> language_ids;
  std::vector<std::string> feature_ids;
  Values values;

  Eigen::Index missing_count() const { return (values.array() == kMissing).count(); }
};

// CSV with a header row of feature ids after a leading id column; cells are
// 0, 1 or ?. Rows and columns that are entirely missing are dropped and
// reported through `warnings`.
FeatureMatrix parse_feature_matrix(std::istream& in, const std::string& source = "<features>",
                                   std::vector<std::string>* warnings = nullptr);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path,
                                  std::vector<std::string>* warnings = nullptr);

enum class Imputation {
  none,         // data must already be complete
  column_mode,  // majority value of the column, ties to 0
};

Imputation parse_imputation(std::string_view name);

FeatureMatrix impute(const FeatureMatrix& features, Imputation method);

// Throws when any cell is missing.
Eigen::MatrixXd to_dense(const FeatureMatrix& features);

Projection2D project_typology(const FeatureMatrix& features);

}  // namespace phonosim
