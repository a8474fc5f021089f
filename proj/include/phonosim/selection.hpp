#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phonosim/corpus.hpp"
#include "phonosim/ipa.hpp"
#include "phonosim/phoneme_stats.hpp"
#include "phonosim/registry.hpp"

namespace phonosim {

enum class Strategy { monolingual, family, all, corpus_sim };

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy);

struct SourceLanguage {
  std::string code;
  std::optional<double> score;  // similarity to the target, when known
};

struct SelectionResult {
  std::string target;
  Strategy strategy = Strategy::monolingual;
  std::vector<SourceLanguage> sources;  // never contains the target
  int k = 0;
  std::vector<std::string> warnings;
};

// The k languages most similar to `target`, in descending similarity. Ties go
// to more recording hours (when a registry is given), then to the smaller
// code. k ≥ N is truncated to N - 1 with a warning.
SelectionResult select_top_k(std::string_view target, const SimilarityMatrix& matrix, int k = 3,
                             const Registry* registry = nullptr);

// monolingual: no sources; family: same-family languages; all: every other
// registry language; corpus_sim: select_top_k (matrix required).
SelectionResult select_strategy(std::string_view target, Strategy strategy,
                                const Registry& registry,
                                const SimilarityMatrix* matrix = nullptr, int k = 3);

struct PhonemeInventory {
  std::vector<std::string> language_scope;
  std::set<Phoneme> phonemes;
};

using PhonemeSets = std::map<std::string, std::set<Phoneme>, std::less<>>;

PhonemeInventory build_inventory(const std::vector<std::string>& scope, const PhonemeSets& sets);

using ConvertedCorpora = std::map<std::string, std::vector<ConvertedUtterance>, std::less<>>;

PhonemeSets phoneme_sets(const ConvertedCorpora& corpora);

struct ManifestUtterance {
  std::string language;
  std::string audio_path;
  PhonemeSequence ipa;
};

struct TrainingManifest {
  std::string target;
  Strategy strategy = Strategy::monolingual;
  std::vector<SourceLanguage> sources;
  std::vector<std::string> languages;  // target first, then sources in order
  std::vector<ManifestUtterance> utterances;
  PhonemeInventory inventory;
  double total_hours = 0;
};

// Utterances of the target and each source, grouped by language in manifest
// order. The inventory spans target and sources; it comes from `sets` when
// given, otherwise from the corpora themselves. Any transcription phoneme
// outside the inventory is a validation error.
TrainingManifest emit_manifest(const SelectionResult& selection, const ConvertedCorpora& corpora,
                               const Registry& registry, const PhonemeSets* sets = nullptr);

// Header block of `# key: value` lines, then `lang<TAB>audio_path<TAB>ipa`.
void write_manifest(std::ostream& out, const TrainingManifest& manifest);

void write_selection_json(std::ostream& out, const SelectionResult& selection);

}  // namespace phonosim
