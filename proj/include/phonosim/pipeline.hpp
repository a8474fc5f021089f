#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phonosim/density.hpp"
#include "phonosim/error.hpp"
#include "phonosim/g2p.hpp"
#include "phonosim/projection.hpp"
#include "phonosim/registry.hpp"
#include "phonosim/selection.hpp"

namespace phonosim {

struct PipelineConfig {
  std::filesystem::path corpus_dir;     // <code>.tsv per language
  std::filesystem::path rules_dir;      // <code>.g2p per language
  std::filesystem::path registry_path;
  std::optional<std::filesystem::path> policy_path;  // built-in policy when absent
  std::string target;
  Strategy strategy = Strategy::corpus_sim;
  int k = 3;
  double contour_level = 0.1;
  bool relative_level = false;
  BandwidthRule bandwidth_rule = BandwidthRule::silverman;
  int resolution = 512;
  UnmatchedMode unmatched = UnmatchedMode::error;
  std::filesystem::path output_dir;

  void validate() const;
};

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, std::string language, const std::string& what)
      : Error("[" + stage + "]" + (language.empty() ? "" : " language '" + language + "':") + " " + what),
        stage_(std::move(stage)),
        language_(std::move(language)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& language() const noexcept { return language_; }

 private:
  std::string stage_;
  std::string language_;
};

struct FamilyContourOptions {
  double level = 0.1;
  bool relative = false;  // level is a fraction of each family's peak density
  BandwidthRule bandwidth_rule = BandwidthRule::silverman;
  Eigen::Index resolution = 512;
};

struct FamilyContours {
  std::vector<LabeledPoint> points;
  std::vector<ContourSet<double>> contours;  // families with at least two languages
  std::vector<std::string> warnings;
};

// Hours-weighted KDE contours of each family's points in a 2D projection.
FamilyContours family_contours(const Projection2D& projection, const Registry& registry,
                               const FamilyContourOptions& options);

struct PipelineSummary {
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> warnings;
};

// corpus -> G2P -> distributions -> similarity -> PCA -> contours ->
// selection -> manifest. Artifacts are staged in a sibling directory and
// moved into `output_dir` only when every stage succeeds.
PipelineSummary run_pipeline(const PipelineConfig& config);

}  // namespace phonosim
