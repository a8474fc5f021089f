#include "phonosim/selection.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "phonosim/error.hpp"
#include "phonosim/text_io.hpp"

namespace phonosim {

Strategy parse_strategy(std::string_view name) {
  if (name == "monolingual") return Strategy::monolingual;
  if (name == "family") return Strategy::family;
  if (name == "all") return Strategy::all;
  if (name == "corpus_sim") return Strategy::corpus_sim;
  throw Error("unknown selection strategy '" + std::string(name) + "'");
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::monolingual: return "monolingual";
    case Strategy::family: return "family";
    case Strategy::all: return "all";
    case Strategy::corpus_sim: return "corpus_sim";
  }
  return "unknown";
}

SelectionResult select_top_k(std::string_view target, const SimilarityMatrix& matrix, int k,
                             const Registry* registry) {
  if (k < 1) throw Error("k must be at least 1");
  const auto row = matrix.index_of(target);
  if (!row) throw Error("target '" + std::string(target) + "' is not in the similarity matrix");

  SelectionResult result;
  result.target = std::string(target);
  result.strategy = Strategy::corpus_sim;
  result.k = k;

  const auto hours = [&](const std::string& code) {
    if (!registry) return 0.0;
    const auto* rec = registry->find(code);
    return rec ? rec->recording_hours : 0.0;
  };

  std::vector<SourceLanguage> candidates;
  for (std::size_t j = 0; j < matrix.codes.size(); ++j) {
    if (j == *row) continue;
    candidates.push_back({matrix.codes[j], matrix.values(static_cast<Eigen::Index>(*row),
                                                         static_cast<Eigen::Index>(j))});
  }
  std::sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
    if (*a.score != *b.score) return *a.score > *b.score;
    const double ha = hours(a.code);
    const double hb = hours(b.code);
    if (ha != hb) return ha > hb;
    return a.code < b.code;
  });

  auto take = static_cast<std::size_t>(k);
  if (take > candidates.size()) {
    result.warnings.push_back("k=" + std::to_string(k) + " exceeds the " +
                              std::to_string(candidates.size()) +
                              " available source languages; truncated");
    take = candidates.size();
  }
  candidates.resize(take);
  result.sources = std::move(candidates);
  return result;
}

SelectionResult select_strategy(std::string_view target, Strategy strategy,
                                const Registry& registry, const SimilarityMatrix* matrix, int k) {
  const auto& target_rec = registry.at(target);
  if (strategy == Strategy::corpus_sim) {
    if (!matrix) throw Error("corpus_sim selection needs a similarity matrix");
    return select_top_k(target, *matrix, k, &registry);
  }

  SelectionResult result;
  result.target = target_rec.code;
  result.strategy = strategy;
  result.k = k;
  std::vector<LanguageRecord> chosen;
  if (strategy == Strategy::family) {
    chosen = registry.family_members(target_rec.family, target_rec.code);
  } else if (strategy == Strategy::all) {
    for (const auto& rec : registry.languages()) {
      if (rec.code != target_rec.code) chosen.push_back(rec);
    }
  }
  for (const auto& rec : chosen) {
    SourceLanguage src{rec.code, std::nullopt};
    if (matrix && matrix->index_of(rec.code) && matrix->index_of(target)) {
      src.score = matrix->at(target, rec.code);
    }
    result.sources.push_back(std::move(src));
  }
  return result;
}

PhonemeInventory build_inventory(const std::vector<std::string>& scope, const PhonemeSets& sets) {
  PhonemeInventory inv;
  inv.language_scope = scope;
  for (const auto& code : scope) {
    const auto it = sets.find(code);
    if (it == sets.end()) throw Error("no phoneme set for language '" + code + "'");
    inv.phonemes.insert(it->second.begin(), it->second.end());
  }
  return inv;
}

PhonemeSets phoneme_sets(const ConvertedCorpora& corpora) {
  PhonemeSets sets;
  for (const auto& [code, utterances] : corpora) {
    auto& set = sets[code];
    for (const auto& u : utterances) set.insert(u.ipa.begin(), u.ipa.end());
  }
  return sets;
}

TrainingManifest emit_manifest(const SelectionResult& selection, const ConvertedCorpora& corpora,
                               const Registry& registry, const PhonemeSets* sets) {
  TrainingManifest m;
  m.target = selection.target;
  m.strategy = selection.strategy;
  m.sources = selection.sources;
  m.languages.push_back(selection.target);
  for (const auto& src : selection.sources) {
    if (src.code == selection.target) throw Error("selection lists the target as a source");
    m.languages.push_back(src.code);
  }

  for (const auto& code : m.languages) {
    if (corpora.find(code) == corpora.end()) throw Error("no corpus for language '" + code + "'");
    m.total_hours += registry.at(code).recording_hours;
  }

  if (sets) {
    m.inventory = build_inventory(m.languages, *sets);
  } else {
    PhonemeSets own;
    for (const auto& code : m.languages) {
      auto& set = own[code];
      for (const auto& u : corpora.find(code)->second) set.insert(u.ipa.begin(), u.ipa.end());
    }
    m.inventory = build_inventory(m.languages, own);
  }

  for (const auto& code : m.languages) {
    for (const auto& u : corpora.find(code)->second) {
      for (const auto& p : u.ipa) {
        if (!m.inventory.phonemes.count(p)) {
          throw Error("utterance '" + u.audio_path + "' of language '" + code +
                      "' contains phoneme '" + p.text() + "' outside the inventory");
        }
      }
      m.utterances.push_back({code, u.audio_path, u.ipa});
    }
  }
  return m;
}

void write_manifest(std::ostream& out, const TrainingManifest& manifest) {
  out << "# target: " << manifest.target << '\n';
  out << "# strategy: " << to_string(manifest.strategy) << '\n';
  out << "# languages: ";
  for (std::size_t i = 0; i < manifest.languages.size(); ++i) {
    out << (i ? " " : "") << manifest.languages[i];
  }
  out << '\n' << "# sources:";
  for (const auto& src : manifest.sources) {
    out << ' ' << src.code;
    if (src.score) out << '=' << format_double(*src.score);
  }
  out << '\n' << "# inventory:";
  for (const auto& p : manifest.inventory.phonemes) out << ' ' << p.text();
  out << '\n' << "# total_hours: " << format_double(manifest.total_hours) << '\n';
  out << "lang\taudio_path\tipa\n";
  for (const auto& u : manifest.utterances) {
    out << u.language << '\t' << u.audio_path << '\t' << join_phonemes(u.ipa) << '\n';
  }
}

void write_selection_json(std::ostream& out, const SelectionResult& selection) {
  nlohmann::ordered_json doc;
  doc["target"] = selection.target;
  doc["strategy"] = std::string(to_string(selection.strategy));
  doc["k"] = selection.k;
  nlohmann::ordered_json sources = nlohmann::ordered_json::array();
  for (const auto& src : selection.sources) {
    nlohmann::ordered_json s;
    s["code"] = src.code;
    s["score"] = src.score ? nlohmann::ordered_json(*src.score) : nlohmann::ordered_json();
    sources.push_back(std::move(s));
  }
  doc["sources"] = std::move(sources);
  doc["warnings"] = selection.warnings;
  out << doc.dump(2) << '\n';
}

}  // namespace phonosim
