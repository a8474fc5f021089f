#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace phonosim {

// One IPA segment: a base symbol with its attached modifiers, a tie-bar pair
// such as t͡ʃ, or a standalone prosodic mark (ˈ ˌ . | ‖ ‿). Text is stored in
// NFC so equal sounds compare equal; ordering is by codepoint sequence.
class Phoneme {
 public:
  // Normalizes to NFC. Throws phonosim::Error on empty or malformed text.
  explicit Phoneme(std::string_view text);

  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const Phoneme&, const Phoneme&) = default;
  friend std::strong_ordering operator<=>(const Phoneme& a, const Phoneme& b) {
    return a.text_.compare(b.text_) <=> 0;
  }

 private:
  std::string text_;
};

using PhonemeSequence = std::vector<Phoneme>;

// Splits an IPA string into segments. Whitespace separates segments and is
// dropped. Combining marks and modifier letters attach to the preceding base;
// a tie bar pulls the next base into the same segment. A mark with nothing
// to attach to raises OffsetError (codepoint offset into the NFC input).
PhonemeSequence tokenize_ipa(std::string_view ipa);

// Space-separated segment texts.
std::string join_phonemes(const PhonemeSequence& seq, std::string_view sep = " ");

bool is_stress_mark(char32_t c);

struct NormalizationPolicy {
  bool strip_stress = true;
  // Braces and the phonation diacritics of voice-quality notation.
  bool strip_voqs = true;
  // Non-base codepoints removed from every segment (in decomposed form).
  std::set<char32_t> strip_diacritics = default_strip_diacritics();
  // Applied once per segment after stripping. Targets never appear as sources.
  std::map<Phoneme, Phoneme> merge_pairs = default_merge_pairs();

  static std::set<char32_t> default_strip_diacritics();
  static std::map<Phoneme, Phoneme> default_merge_pairs();

  // Throws phonosim::Error when a stripped codepoint is a base or tie bar, a
  // merge target is also a source, or a merge target is not a single clean
  // segment under this policy.
  void validate() const;
};

// Output never has more segments than the input. Idempotent for any policy
// that passes validate().
PhonemeSequence normalize(const PhonemeSequence& seq, const NormalizationPolicy& policy);

// Key/value file:
//   strip_stress = true|false
//   strip_voqs = true|false
//   strip_diacritics = ˈ ˌ . U+02D0      (replaces the default set)
//   default_merges = true|false          (keep the built-in merge pairs)
//   [merge]
//   source<TAB>target
// `#` starts a comment line. The result is validated.
NormalizationPolicy parse_policy(std::istream& in, const std::string& source = "<policy>");
NormalizationPolicy load_policy(const std::filesystem::path& path);

}  // namespace phonosim
