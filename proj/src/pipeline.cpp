#include "phonosim/pipeline.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "phonosim/corpus.hpp"
#include "phonosim/phoneme_stats.hpp"
#include "phonosim/projection.hpp"
#include "phonosim/registry.hpp"
#include "phonosim/text_io.hpp"

namespace fs = std::filesystem;

namespace phonosim {

void PipelineConfig::validate() const {
  if (k < 1) throw Error("k must be at least 1");
  if (!(contour_level > 0)) throw Error("contour level must be positive");
  if (resolution < 16) throw Error("resolution must be at least 16");
  if (target.empty()) throw Error("target language is required");
  if (output_dir.empty()) throw Error("output directory is required");
}

namespace {

template <typename F>
auto stage(const std::string& name, const std::string& language, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(name, language, e.what());
  } catch (const fs::filesystem_error& e) {
    throw PipelineError(name, language, e.what());
  }
}

class Staging {
 public:
  explicit Staging(fs::path final_dir)
      : final_(std::move(final_dir)), dir_(final_.string() + ".partial") {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    auto out = open_output(dir_ / name);
    body(out);
    out.close();
    if (!out) throw Error("failed writing " + (dir_ / name).string());
    names_.push_back(name);
  }

  std::vector<fs::path> commit() {
    fs::create_directories(final_);
    std::vector<fs::path> moved;
    for (const auto& name : names_) {
      fs::rename(dir_ / name, final_ / name);
      moved.push_back(final_ / name);
    }
    return moved;
  }

 private:
  fs::path final_;
  fs::path dir_;
  std::vector<std::string> names_;
};

}  // namespace

FamilyContours family_contours(const Projection2D& projection, const Registry& registry,
                               const FamilyContourOptions& options) {
  if (projection.coords.cols() < 2) throw Error("contours need a 2D projection");
  FamilyContours out;
  std::map<std::string, std::vector<Eigen::Index>> family_rows;
  for (std::size_t i = 0; i < projection.ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const auto* rec = registry.find(projection.ids[i]);
    if (!rec) {
      out.warnings.push_back("'" + projection.ids[i] + "' is not in the registry; no family contour");
    } else {
      family_rows[rec->family].push_back(r);
    }
    out.points.push_back({projection.ids[i], rec ? rec->family : std::string{},
                          projection.coords(r, 0), projection.coords(r, 1)});
  }
  for (const auto& [family, rows] : family_rows) {
    if (rows.size() < 2) {
      out.warnings.push_back("family '" + family + "' has fewer than two languages; no contour");
      continue;
    }
    try {
      Points2<double> xy(static_cast<Eigen::Index>(rows.size()), 2);
      Eigen::VectorXd hours(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t m = 0; m < rows.size(); ++m) {
        const auto r = static_cast<Eigen::Index>(m);
        xy.row(r) = projection.coords.row(rows[m]).leftCols(2);
        hours[r] = registry.at(projection.ids[static_cast<std::size_t>(rows[m])]).recording_hours;
      }
      const auto params = make_kde_params(xy, hours, family, options.bandwidth_rule);
      const auto grid = rasterize(xy, params, options.resolution);
      const double level = options.relative ? relative_level(grid, options.level) : options.level;
      auto set = extract_contours<double>(grid, level, family, [&](double x, double y) {
        return kde_density(x, y, xy, params);
      });
      if (set.below_level) {
        out.warnings.push_back("family '" + family + "' density never reaches level " +
                               format_double(level));
      }
      out.contours.push_back(std::move(set));
    } catch (const Error& e) {
      throw Error("family '" + family + "': " + e.what());
    }
  }
  return out;
}

PipelineSummary run_pipeline(const PipelineConfig& config) {
  stage("config", "", [&] { config.validate(); });
  PipelineSummary summary;

  const Registry registry = stage("registry", "", [&] { return load_registry(config.registry_path); });
  stage("registry", config.target, [&] { registry.at(config.target); });
  const NormalizationPolicy policy = stage("policy", "", [&] {
    return config.policy_path ? load_policy(*config.policy_path) : NormalizationPolicy{};
  });

  ConvertedCorpora corpora;
  for (const auto& rec : registry.languages()) {
    const fs::path corpus_path = config.corpus_dir / (rec.code + ".tsv");
    if (!fs::exists(corpus_path)) {
      summary.warnings.push_back("no corpus for '" + rec.code + "'; language skipped");
      continue;
    }
    const auto utterances = stage("corpus", rec.code, [&] { return load_corpus(corpus_path); });
    const fs::path rules_path = config.rules_dir / (rec.code + ".g2p");
    corpora[rec.code] = stage("g2p", rec.code, [&] {
      if (!fs::exists(rules_path)) throw Error("missing rule file " + rules_path.string());
      const Ruleset rules = load_ruleset(rules_path);
      return convert_corpus(utterances, rules, policy, config.unmatched, corpus_path.string());
    });
  }
  if (!corpora.count(config.target)) {
    throw PipelineError("corpus", config.target, "target language has no corpus");
  }

  std::vector<PhonemeCounts> counts;
  std::vector<std::string> counted_codes;
  for (const auto& [code, converted] : corpora) {
    auto c = count_phonemes(converted);
    if (c.empty()) {
      summary.warnings.push_back("empty corpus for '" + code + "'; excluded from the matrix");
      continue;
    }
    counts.push_back(std::move(c));
    counted_codes.push_back(code);
  }
  const GlobalVocabulary vocab = build_vocabulary(counts);
  std::vector<PhonemeDistribution> dists;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    dists.push_back(stage("distributions", counted_codes[i],
                          [&] { return to_distribution(counted_codes[i], counts[i], vocab); }));
  }
  const SimilarityMatrix matrix = stage("similarity", "", [&] { return similarity_matrix(dists); });
  const Projection2D projection =
      stage("pca", "", [&] { return pca_project(matrix.values, matrix.codes, 2); });

  const FamilyContours contours = stage("contours", "", [&] {
    FamilyContourOptions options;
    options.level = config.contour_level;
    options.relative = config.relative_level;
    options.bandwidth_rule = config.bandwidth_rule;
    options.resolution = config.resolution;
    return family_contours(projection, registry, options);
  });
  summary.warnings.insert(summary.warnings.end(), contours.warnings.begin(), contours.warnings.end());

  const SelectionResult selection = stage("selection", config.target, [&] {
    return select_strategy(config.target, config.strategy, registry, &matrix, config.k);
  });
  summary.warnings.insert(summary.warnings.end(), selection.warnings.begin(),
                          selection.warnings.end());
  const TrainingManifest manifest =
      stage("manifest", config.target, [&] { return emit_manifest(selection, corpora, registry); });

  std::map<std::string, std::string> family_of;
  for (const auto& id : projection.ids) family_of[id] = registry.at(id).family;

  Staging staging(config.output_dir);
  stage("write", "", [&] {
    staging.write("distributions.csv",
                  [&](std::ostream& o) { write_distributions_csv(o, vocab, dists); });
    staging.write("similarity.csv", [&](std::ostream& o) { write_similarity_csv(o, matrix); });
    staging.write("coords.csv",
                  [&](std::ostream& o) { write_coordinates_csv(o, projection, &family_of); });
    staging.write("contours.json", [&](std::ostream& o) { write_contours_json(o, contours.contours); });
    staging.write("contours.svg",
                  [&](std::ostream& o) { write_contours_svg(o, contours.points, contours.contours); });
    staging.write("selection.json", [&](std::ostream& o) { write_selection_json(o, selection); });
    staging.write("manifest.tsv", [&](std::ostream& o) { write_manifest(o, manifest); });
    staging.write("report.json", [&](std::ostream& o) {
      nlohmann::ordered_json doc;
      nlohmann::ordered_json means = nlohmann::ordered_json::object();
      for (const auto& [family, mean] : intra_family_mean_similarity(matrix, registry)) {
        means[family] = mean ? nlohmann::ordered_json(*mean) : nlohmann::ordered_json();
      }
      doc["intra_family_mean_similarity"] = std::move(means);
      doc["languages"] = matrix.codes;
      doc["warnings"] = summary.warnings;
      o << doc.dump(2) << '\n';
    });
    summary.artifacts = staging.commit();
  });
  return summary;
}

}  // namespace phonosim
