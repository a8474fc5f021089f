#include "phonosim/corpus.hpp"

#include <algorithm>
#include <istream>

#include "phonosim/error.hpp"
#include "phonosim/text_io.hpp"

namespace phonosim {

std::vector<Utterance> parse_corpus(std::istream& in, const std::string& source) {
  const auto lines = read_lines(in);
  std::vector<Utterance> out;
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) return out;

  const auto header = split(lines[first], '\t');
  const auto column = [&](std::string_view name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto sentence_col = column("sentence");
  const auto path_col = column("path");
  if (sentence_col < 0) throw ParseError(source, first + 1, "header has no 'sentence' column");

  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split(lines[i], '\t');
    if (static_cast<std::ptrdiff_t>(fields.size()) <= sentence_col ||
        (path_col >= 0 && static_cast<std::ptrdiff_t>(fields.size()) <= path_col)) {
      throw ParseError(source, i + 1, "row has fewer columns than the header");
    }
    Utterance u;
    u.text = fields[static_cast<std::size_t>(sentence_col)];
    if (path_col >= 0) u.audio_path = fields[static_cast<std::size_t>(path_col)];
    u.line = i + 1;
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Utterance> load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in, path.string());
}

std::vector<ConvertedUtterance> convert_corpus(std::span<const Utterance> corpus,
                                               const Ruleset& rules,
                                               const NormalizationPolicy& policy,
                                               UnmatchedMode mode, const std::string& source) {
  std::vector<ConvertedUtterance> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& u = corpus[i];
    try {
      out.push_back({u.audio_path, rules.transliterate(u.text, policy, mode)});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(source, u.line ? u.line : i + 1, e.what());
    }
  }
  return out;
}

}  // namespace phonosim
