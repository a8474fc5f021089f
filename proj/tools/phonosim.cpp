// phonosim: command line front end for the phonosim library.
//
// Exit codes: 0 success, 1 usage, 2 data or validation error, 3 internal error.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phonosim/corpus.hpp"
#include "phonosim/density.hpp"
#include "phonosim/error.hpp"
#include "phonosim/g2p.hpp"
#include "phonosim/ipa.hpp"
#include "phonosim/per.hpp"
#include "phonosim/phoneme_stats.hpp"
#include "phonosim/pipeline.hpp"
#include "phonosim/projection.hpp"
#include "phonosim/registry.hpp"
#include "phonosim/selection.hpp"
#include "phonosim/text_io.hpp"
#include "phonosim/typology.hpp"

namespace fs = std::filesystem;
using namespace phonosim;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

NormalizationPolicy policy_from(const std::string& path) {
  return path.empty() ? NormalizationPolicy{} : load_policy(path);
}

// Writes to `path`, or standard output for "-" or empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  auto out = open_output(path);
  body(out);
}

PhonemeSequence split_sequence(const std::string& line) {
  PhonemeSequence seq;
  for (const auto& tok : split_whitespace(line)) seq.emplace_back(tok);
  return seq;
}

struct CorpusAnalysis {
  ConvertedCorpora corpora;
  GlobalVocabulary vocab;
  std::vector<PhonemeDistribution> distributions;
};

CorpusAnalysis analyze_corpora(const fs::path& corpus_dir, const fs::path& rules_dir,
                               const NormalizationPolicy& policy, UnmatchedMode mode) {
  if (!fs::is_directory(corpus_dir)) throw Error("not a directory: " + corpus_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  CorpusAnalysis a;
  std::vector<PhonemeCounts> counts;
  std::vector<std::string> codes;
  for (const auto& file : files) {
    const std::string code = file.stem().string();
    const fs::path rules_path = rules_dir / (code + ".g2p");
    if (!fs::exists(rules_path)) throw Error("language '" + code + "': missing rule file " + rules_path.string());
    const auto rules = load_ruleset(rules_path);
    auto converted = convert_corpus(load_corpus(file), rules, policy, mode, file.string());
    auto c = count_phonemes(converted);
    a.corpora[code] = std::move(converted);
    if (c.empty()) {
      warn("empty corpus for '" + code + "'; excluded from the matrix");
      continue;
    }
    counts.push_back(std::move(c));
    codes.push_back(code);
  }
  a.vocab = build_vocabulary(counts);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    a.distributions.push_back(to_distribution(codes[i], counts[i], a.vocab));
  }
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phoneme-distribution language similarity and source selection toolkit", "phonosim"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML config file, [pipeline] section; flags override it");

  // registry
  auto* registry_cmd = app.add_subcommand("registry", "Language registry tools");
  registry_cmd->require_subcommand(1);
  auto* registry_validate = registry_cmd->add_subcommand("validate", "Check a registry file");
  std::string registry_path;
  double threshold = kDefaultLowResourceHours;
  registry_validate->add_option("path", registry_path, "Registry CSV")->required();
  registry_validate->add_option("--threshold", threshold, "Low-resource threshold in hours")
      ->capture_default_str();

  // ipa
  auto* ipa_cmd = app.add_subcommand("ipa", "IPA tools");
  ipa_cmd->require_subcommand(1);
  auto* ipa_tokenize = ipa_cmd->add_subcommand("tokenize", "Segment and normalize IPA lines from stdin");
  std::string policy_path;
  bool raw = false;
  ipa_tokenize->add_option("--policy", policy_path, "Normalization policy file");
  ipa_tokenize->add_flag("--raw", raw, "Segment only, skip normalization");

  // g2p
  auto* g2p_cmd = app.add_subcommand("g2p", "Convert text lines from stdin to IPA segments");
  std::string rules_path;
  std::string mode_name = "error";
  g2p_cmd->add_option("--rules", rules_path, "Rule file")->required();
  g2p_cmd->add_option("--mode", mode_name, "Unmatched graphemes: error, skip or passthrough")
      ->check(CLI::IsMember({"error", "skip", "passthrough"}))
      ->capture_default_str();
  g2p_cmd->add_option("--policy", policy_path, "Normalization policy file");

  // sim
  auto* sim_cmd = app.add_subcommand("sim", "Phoneme distribution similarity");
  sim_cmd->require_subcommand(1);
  auto* sim_matrix = sim_cmd->add_subcommand("matrix", "Cosine similarity matrix of corpora");
  std::string corpus_dir, rules_dir, out_path, distributions_path;
  sim_matrix->add_option("--corpus-dir", corpus_dir, "Directory of <code>.tsv corpora")->required();
  sim_matrix->add_option("--rules-dir", rules_dir, "Directory of <code>.g2p rule files")->required();
  sim_matrix->add_option("--policy", policy_path, "Normalization policy file");
  sim_matrix->add_option("--out", out_path, "Matrix CSV")->required();
  sim_matrix->add_option("--distributions", distributions_path, "Also write distributions CSV");
  sim_matrix->add_option("--mode", mode_name, "Unmatched graphemes: error, skip or passthrough")
      ->check(CLI::IsMember({"error", "skip", "passthrough"}));

  // pca
  auto* pca_cmd = app.add_subcommand("pca", "Project similarity matrix rows to 2D");
  std::string in_path;
  pca_cmd->add_option("--in", in_path, "Matrix CSV")->required();
  pca_cmd->add_option("--out", out_path, "Coordinates CSV")->required();

  // contours
  auto* contours_cmd = app.add_subcommand("contours", "Per-family KDE contours");
  std::string coords_path;
  double level = 0.1;
  int resolution = 512;
  bool relative = false;
  bool robust = false;
  contours_cmd->add_option("--coords", coords_path, "Coordinates CSV")->required();
  contours_cmd->add_option("--registry", registry_path, "Registry CSV")->required();
  contours_cmd->add_option("--level", level, "Density level")->capture_default_str()
      ->check(CLI::PositiveNumber);
  contours_cmd->add_option("--resolution", resolution, "Grid cells per axis")->capture_default_str()
      ->check(CLI::Range(16, 1 << 14));
  contours_cmd->add_option("--out", out_path, "Output .json or .svg")->required();
  contours_cmd->add_flag("--relative", relative, "Interpret level as a fraction of peak density");
  contours_cmd->add_flag("--robust-bandwidth", robust, "Use min(sigma, IQR/1.34) in Silverman's rule");

  // typology
  auto* typology_cmd = app.add_subcommand("typology", "PCA of binary typological features");
  std::string features_path, impute_name = "none";
  typology_cmd->add_option("--features", features_path, "Feature CSV")->required();
  typology_cmd->add_option("--impute", impute_name, "none or column_mode")
      ->check(CLI::IsMember({"none", "column_mode"}))
      ->capture_default_str();
  typology_cmd->add_option("--registry", registry_path, "Registry CSV for the family column");
  typology_cmd->add_option("--out", out_path, "Coordinates CSV")->required();

  // select
  auto* select_cmd = app.add_subcommand("select", "Choose source languages for a target");
  std::string target, strategy_name = "corpus_sim", matrix_path, manifest_path;
  int k = 3;
  select_cmd->add_option("--target", target, "Target language code")->required();
  select_cmd->add_option("--strategy", strategy_name, "corpus_sim, family, all or monolingual")
      ->check(CLI::IsMember({"corpus_sim", "family", "all", "monolingual"}))
      ->capture_default_str();
  select_cmd->add_option("--k", k, "Number of sources for corpus_sim")->capture_default_str()
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("--registry", registry_path, "Registry CSV")->required();
  select_cmd->add_option("--matrix", matrix_path, "Similarity matrix CSV");
  select_cmd->add_option("--corpus-dir", corpus_dir, "Corpora, needed for --manifest");
  select_cmd->add_option("--rules-dir", rules_dir, "Rule files, needed for --manifest");
  select_cmd->add_option("--policy", policy_path, "Normalization policy file");
  select_cmd->add_option("--manifest", manifest_path, "Write a training manifest TSV");
  select_cmd->add_option("--out", out_path, "Selection JSON (default stdout)");

  // per
  auto* per_cmd = app.add_subcommand("per", "Phoneme error rate of line-aligned files");
  std::string ref_path, hyp_path;
  bool macro = false;
  per_cmd->add_option("--ref", ref_path, "Reference sequences")->required();
  per_cmd->add_option("--hyp", hyp_path, "Hypothesis sequences")->required();
  per_cmd->add_flag("--macro", macro, "Average per-utterance rates instead of pooling counts");

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage end to end");
  PipelineConfig pc;
  std::string pc_corpus, pc_rules, pc_registry, pc_policy, pc_out, pc_mode = "error";
  pipeline_cmd->add_option("--corpus-dir", pc_corpus, "Directory of <code>.tsv corpora")->required();
  pipeline_cmd->add_option("--rules-dir", pc_rules, "Directory of <code>.g2p rule files")->required();
  pipeline_cmd->add_option("--registry", pc_registry, "Registry CSV")->required();
  pipeline_cmd->add_option("--policy", pc_policy, "Normalization policy file");
  pipeline_cmd->add_option("--target", pc.target, "Target language code")->required();
  pipeline_cmd->add_option("--strategy", strategy_name, "corpus_sim, family, all or monolingual")
      ->check(CLI::IsMember({"corpus_sim", "family", "all", "monolingual"}));
  pipeline_cmd->add_option("--k", pc.k, "Number of sources")->check(CLI::PositiveNumber);
  pipeline_cmd->add_option("--level", pc.contour_level, "Contour density level")
      ->check(CLI::PositiveNumber);
  pipeline_cmd->add_flag("--relative", pc.relative_level, "Relative contour level");
  pipeline_cmd->add_flag("--robust-bandwidth", robust, "Robust Silverman bandwidth");
  pipeline_cmd->add_option("--resolution", pc.resolution, "Grid cells per axis")
      ->check(CLI::Range(16, 1 << 14));
  pipeline_cmd->add_option("--mode", pc_mode, "Unmatched graphemes: error, skip or passthrough")
      ->check(CLI::IsMember({"error", "skip", "passthrough"}));
  pipeline_cmd->add_option("--out", pc_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*registry_validate) {
      const auto reg = load_registry(registry_path, threshold);
      std::size_t low = 0;
      for (const auto& rec : reg.languages()) low += reg.is_low_resource(rec.code) ? 1 : 0;
      std::cout << "ok: " << reg.size() << " languages, " << low << " low-resource (< "
                << format_double(threshold) << " h)\n";
      for (const auto& rec : reg.languages()) {
        std::cout << rec.code << '\t' << rec.name << '\t' << rec.family << '\t'
                  << format_double(rec.recording_hours) << '\t'
                  << (reg.is_low_resource(rec.code) ? "low-resource" : "-") << '\n';
      }
    } else if (*ipa_tokenize) {
      const auto policy = policy_from(policy_path);
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(std::cin, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
          auto seq = tokenize_ipa(line);
          if (!raw) seq = normalize(seq, policy);
          std::cout << join_phonemes(seq) << '\n';
        } catch (const Error& e) {
          throw ParseError("<stdin>", line_no, e.what());
        }
      }
    } else if (*g2p_cmd) {
      const auto rules = load_ruleset(rules_path);
      const auto policy = policy_from(policy_path);
      const auto mode = parse_unmatched_mode(mode_name);
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(std::cin, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
          std::cout << join_phonemes(rules.transliterate(line, policy, mode)) << '\n';
        } catch (const Error& e) {
          throw ParseError("<stdin>", line_no, e.what());
        }
      }
    } else if (*sim_matrix) {
      const auto analysis = analyze_corpora(corpus_dir, rules_dir, policy_from(policy_path),
                                            parse_unmatched_mode(mode_name));
      const auto matrix = similarity_matrix(analysis.distributions);
      emit(out_path, [&](std::ostream& o) { write_similarity_csv(o, matrix); });
      if (!distributions_path.empty()) {
        emit(distributions_path,
             [&](std::ostream& o) { write_distributions_csv(o, analysis.vocab, analysis.distributions); });
      }
    } else if (*pca_cmd) {
      auto in = open_input(in_path);
      const auto matrix = parse_similarity_csv(in, in_path);
      const auto projection = pca_project(matrix.values, matrix.codes, 2);
      emit(out_path, [&](std::ostream& o) { write_coordinates_csv(o, projection); });
    } else if (*contours_cmd) {
      auto in = open_input(coords_path);
      const auto projection = parse_coordinates_csv(in, coords_path);
      const auto reg = load_registry(registry_path);
      FamilyContourOptions options;
      options.level = level;
      options.relative = relative;
      options.bandwidth_rule = robust ? BandwidthRule::silverman_robust : BandwidthRule::silverman;
      options.resolution = resolution;
      const auto result = family_contours(projection, reg, options);
      for (const auto& w : result.warnings) warn(w);
      const bool svg = fs::path(out_path).extension() == ".svg";
      emit(out_path, [&](std::ostream& o) {
        if (svg) {
          write_contours_svg(o, result.points, result.contours);
        } else {
          write_contours_json(o, result.contours);
        }
      });
    } else if (*typology_cmd) {
      std::vector<std::string> warnings;
      const auto features = load_feature_matrix(features_path, &warnings);
      for (const auto& w : warnings) warn(w);
      const auto complete = impute(features, parse_imputation(impute_name));
      const auto projection = project_typology(complete);
      std::map<std::string, std::string> families;
      if (!registry_path.empty()) {
        const auto reg = load_registry(registry_path);
        for (const auto& rec : reg.languages()) families[rec.code] = rec.family;
      }
      emit(out_path, [&](std::ostream& o) { write_coordinates_csv(o, projection, &families); });
    } else if (*select_cmd) {
      const auto reg = load_registry(registry_path);
      std::optional<SimilarityMatrix> matrix;
      if (!matrix_path.empty()) {
        auto in = open_input(matrix_path);
        matrix = parse_similarity_csv(in, matrix_path);
      }
      const auto selection = select_strategy(target, parse_strategy(strategy_name), reg,
                                             matrix ? &*matrix : nullptr, k);
      for (const auto& w : selection.warnings) warn(w);
      emit(out_path, [&](std::ostream& o) { write_selection_json(o, selection); });
      if (!manifest_path.empty()) {
        if (corpus_dir.empty() || rules_dir.empty()) {
          throw Error("--manifest needs --corpus-dir and --rules-dir");
        }
        const auto analysis =
            analyze_corpora(corpus_dir, rules_dir, policy_from(policy_path), UnmatchedMode::error);
        const auto manifest = emit_manifest(selection, analysis.corpora, reg);
        emit(manifest_path, [&](std::ostream& o) { write_manifest(o, manifest); });
      }
    } else if (*per_cmd) {
      auto ref_in = open_input(ref_path);
      auto hyp_in = open_input(hyp_path);
      const auto refs = read_lines(ref_in);
      const auto hyps = read_lines(hyp_in);
      if (refs.size() != hyps.size()) {
        throw Error("reference has " + std::to_string(refs.size()) + " lines, hypothesis has " +
                    std::to_string(hyps.size()));
      }
      std::vector<SequencePair> pairs;
      for (std::size_t i = 0; i < refs.size(); ++i) {
        auto ref = split_sequence(refs[i]);
        if (ref.empty()) throw ParseError(ref_path, i + 1, "empty reference sequence");
        pairs.emplace_back(std::move(ref), split_sequence(hyps[i]));
      }
      const auto report = corpus_per(pairs, macro ? Averaging::macro : Averaging::micro);
      nlohmann::ordered_json doc;
      doc["utterances"] = pairs.size();
      doc["substitutions"] = report.substitutions;
      doc["insertions"] = report.insertions;
      doc["deletions"] = report.deletions;
      doc["reference_length"] = report.reference_length;
      doc["averaging"] = macro ? "macro" : "micro";
      doc["per_percent"] = report.per_percent;
      std::cout << doc.dump(2) << '\n';
    } else if (*pipeline_cmd) {
      pc.corpus_dir = pc_corpus;
      pc.rules_dir = pc_rules;
      pc.registry_path = pc_registry;
      if (!pc_policy.empty()) pc.policy_path = pc_policy;
      pc.output_dir = pc_out;
      pc.strategy = parse_strategy(strategy_name);
      pc.unmatched = parse_unmatched_mode(pc_mode);
      pc.bandwidth_rule = robust ? BandwidthRule::silverman_robust : BandwidthRule::silverman;
      const auto summary = run_pipeline(pc);
      for (const auto& w : summary.warnings) warn(w);
      for (const auto& path : summary.artifacts) std::cout << path.string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
