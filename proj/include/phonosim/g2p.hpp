#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phonosim/error.hpp"
#include "phonosim/ipa.hpp"

namespace phonosim {

// Anchored grapheme-class pattern used as a rule context. Elements:
//   x        one literal grapheme
//   [abc]    any of the listed graphemes, [^abc] any but them
//   #        word boundary (first element of a left context, last of a
//            right context)
// A left context must end immediately before the matched grapheme, a right
// context must start immediately after it.
class ContextPattern {
 public:
  enum class Side { left, right };

  static ContextPattern parse(std::string_view pattern, Side side, bool case_fold);

  const std::string& source() const noexcept { return source_; }
  bool matches(std::u32string_view text, std::size_t begin, std::size_t end) const;

 private:
  struct Element {
    enum class Kind { literal, set, boundary } kind = Kind::literal;
    std::u32string members;
    bool negated = false;
  };

  bool element_matches(const Element& e, char32_t c) const;

  std::string source_;
  Side side_ = Side::left;
  std::vector<Element> elements_;
};

struct G2PRule {
  std::string grapheme;
  std::string output;  // IPA, possibly several segments, empty for silent letters
  std::string left_context;
  std::string right_context;
  int priority = 0;
};

enum class UnmatchedMode { error, skip, passthrough };

UnmatchedMode parse_unmatched_mode(std::string_view name);

class G2PError : public OffsetError {
 public:
  G2PError(std::size_t offset, std::string grapheme)
      : OffsetError(offset, "no rule matches '" + grapheme + "'"), grapheme_(std::move(grapheme)) {}

  const std::string& grapheme() const noexcept { return grapheme_; }

 private:
  std::string grapheme_;
};

// Validated, immutable rule table for one language.
class Ruleset {
 public:
  Ruleset(std::string language_code, std::vector<G2PRule> rules, bool case_fold = true,
          bool punctuation_strip = true);

  const std::string& language_code() const noexcept { return language_code_; }
  const std::vector<G2PRule>& rules() const noexcept { return rules_; }
  bool case_fold() const noexcept { return case_fold_; }
  bool punctuation_strip() const noexcept { return punctuation_strip_; }

  // Greedy left-to-right conversion. At each position the longest matching
  // grapheme wins, then the higher priority, then the earlier rule. Text is
  // NFC-normalized first; reported offsets are codepoints into that text.
  PhonemeSequence transliterate(std::string_view text, const NormalizationPolicy& policy,
                                UnmatchedMode mode = UnmatchedMode::error) const;

 private:
  struct Compiled {
    std::u32string grapheme;
    std::optional<ContextPattern> left;
    std::optional<ContextPattern> right;
  };

  std::u32string prepare(std::string_view text, std::vector<std::size_t>& offsets) const;

  std::string language_code_;
  std::vector<G2PRule> rules_;
  std::vector<Compiled> compiled_;
  bool case_fold_;
  bool punctuation_strip_;
  std::u32string protected_chars_;  // punctuation that rules use as graphemes
  std::unordered_map<char32_t, std::vector<std::size_t>> by_first_char_;
};

inline PhonemeSequence transliterate(std::string_view text, const Ruleset& rules,
                                     const NormalizationPolicy& policy,
                                     UnmatchedMode mode = UnmatchedMode::error) {
  return rules.transliterate(text, policy, mode);
}

// Rule file: `grapheme<TAB>ipa<TAB>left<TAB>right<TAB>priority`, trailing
// fields optional, `#` comment lines, and `@language`, `@case_fold`,
// `@punctuation_strip` directives. Without `@language` the code is the file
// name up to its first dot.
Ruleset parse_ruleset(std::istream& in, const std::string& source,
                      std::string default_language = {});
Ruleset load_ruleset(const std::filesystem::path& path);

}  // namespace phonosim
