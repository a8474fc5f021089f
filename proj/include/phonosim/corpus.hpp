#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "phonosim/g2p.hpp"
#include "phonosim/ipa.hpp"

namespace phonosim {

struct Utterance {
  std::string audio_path;
  std::string text;
  std::size_t line = 0;  // 1-based line in the source file
};

struct ConvertedUtterance {
  std::string audio_path;
  PhonemeSequence ipa;
};

// Tab-separated corpus with a header row naming at least the `sentence`
// column; `path` is optional. Common Voice `validated.tsv` files load as is.
std::vector<Utterance> parse_corpus(std::istream& in, const std::string& source = "<corpus>");
std::vector<Utterance> load_corpus(const std::filesystem::path& path);

// Converts every utterance in input order. In error mode the first failing
// utterance aborts with a ParseError carrying its line.
std::vector<ConvertedUtterance> convert_corpus(std::span<const Utterance> corpus,
                                               const Ruleset& rules,
                                               const NormalizationPolicy& policy,
                                               UnmatchedMode mode = UnmatchedMode::error,
                                               const std::string& source = "<corpus>");

}  // namespace phonosim
