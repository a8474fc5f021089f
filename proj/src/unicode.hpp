#pragma once

#include <string>
#include <string_view>

namespace phonosim::detail {

enum class CharClass {
  whitespace,
  base,       // letters, digits, punctuation: anything that starts a segment
  combining,  // nonspacing / enclosing marks
  tie_bar,    // U+0361, U+035C: bind the next base into the same segment
  modifier,   // spacing modifier letters and symbols (length, aspiration, tone)
  prosodic,   // stress, syllable and group boundaries: standalone segments
};

CharClass classify(char32_t c);
bool is_voice_quality_symbol(char32_t c);
bool is_punctuation_or_symbol(char32_t c);
char32_t fold_case(char32_t c);

// Throws phonosim::Error on malformed UTF-8.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

std::string to_nfc(std::string_view s);
std::string to_nfd(std::string_view s);

}  // namespace phonosim::detail
