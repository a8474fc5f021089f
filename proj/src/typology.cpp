#include "phonosim/typology.hpp"

#include <istream>

#include "phonosim/error.hpp"
#include "phonosim/text_io.hpp"

namespace phonosim {

FeatureMatrix parse_feature_matrix(std::istream& in, const std::string& source,
                                   std::vector<std::string>* warnings) {
  const auto lines = read_lines(in);
  FeatureMatrix fm;
  std::vector<std::vector<std::int8_t>> rows;
  bool header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    auto fields = parse_csv_line(lines[i], source, line_no);
    for (auto& f : fields) f = std::string(trim(f));
    if (!header) {
      if (fields.size() < 2) throw ParseError(source, line_no, "header needs at least one feature");
      fm.feature_ids.assign(fields.begin() + 1, fields.end());
      header = true;
      continue;
    }
    if (fields.size() != fm.feature_ids.size() + 1) {
      throw ParseError(source, line_no, "expected " + std::to_string(fm.feature_ids.size() + 1) +
                                            " fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(source, line_no, "empty language id");
    std::vector<std::int8_t> row;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      const auto& cell = fields[j];
      if (cell == "0") {
        row.push_back(0);
      } else if (cell == "1") {
        row.push_back(1);
      } else if (cell == "?") {
        row.push_back(FeatureMatrix::kMissing);
      } else {
        throw ParseError(source, line_no,
                         "language '" + fields[0] + "', feature '" + fm.feature_ids[j - 1] +
                             "': value '" + cell + "' is not 0, 1 or ?");
      }
    }
    fm.language_ids.push_back(fields[0]);
    rows.push_back(std::move(row));
  }
  if (!header) throw ParseError(source, 1, "missing header row");

  std::vector<bool> keep_row(rows.size(), true);
  std::vector<bool> keep_col(fm.feature_ids.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < keep_col.size(); ++j) {
      if (!keep_col[j]) continue;
      bool any = false;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        any = any || (keep_row[r] && rows[r][j] != FeatureMatrix::kMissing);
      }
      if (!any) {
        keep_col[j] = false;
        changed = true;
        if (warnings) warnings->push_back("dropped feature '" + fm.feature_ids[j] + "': all values missing");
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!keep_row[r]) continue;
      bool any = false;
      for (std::size_t j = 0; j < keep_col.size(); ++j) {
        any = any || (keep_col[j] && rows[r][j] != FeatureMatrix::kMissing);
      }
      if (!any) {
        keep_row[r] = false;
        changed = true;
        if (warnings) warnings->push_back("dropped language '" + fm.language_ids[r] + "': all values missing");
      }
    }
  }

  FeatureMatrix out;
  for (std::size_t j = 0; j < keep_col.size(); ++j) {
    if (keep_col[j]) out.feature_ids.push_back(fm.feature_ids[j]);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (keep_row[r]) out.language_ids.push_back(fm.language_ids[r]);
  }
  out.values.resize(static_cast<Eigen::Index>(out.language_ids.size()),
                    static_cast<Eigen::Index>(out.feature_ids.size()));
  Eigen::Index orow = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!keep_row[r]) continue;
    Eigen::Index ocol = 0;
    for (std::size_t j = 0; j < keep_col.size(); ++j) {
      if (keep_col[j]) out.values(orow, ocol++) = rows[r][j];
    }
    ++orow;
  }
  return out;
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path,
                                  std::vector<std::string>* warnings) {
  auto in = open_input(path);
  return parse_feature_matrix(in, path.string(), warnings);
}

Imputation parse_imputation(std::string_view name) {
  if (name == "none") return Imputation::none;
  if (name == "column_mode") return Imputation::column_mode;
  throw Error("unknown imputation method '" + std::string(name) + "'");
}

FeatureMatrix impute(const FeatureMatrix& features, Imputation method) {
  const auto missing = features.missing_count();
  if (method == Imputation::none) {
    if (missing > 0) {
      throw Error("feature matrix has " + std::to_string(missing) +
                  " missing values; impute them or use column_mode");
    }
    return features;
  }
  FeatureMatrix out = features;
  for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
    const auto col = features.values.col(j).array();
    const auto ones = (col == 1).count();
    const auto zeros = (col == 0).count();
    const std::int8_t mode = ones > zeros ? 1 : 0;
    for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
      if (out.values(i, j) == FeatureMatrix::kMissing) out.values(i, j) = mode;
    }
  }
  return out;
}

Eigen::MatrixXd to_dense(const FeatureMatrix& features) {
  if (features.missing_count() > 0) throw Error("feature matrix has missing values");
  return features.values.cast<double>();
}

Projection2D project_typology(const FeatureMatrix& features) {
  return pca_project(to_dense(features), features.language_ids, 2);
}

}  // namespace phonosim
