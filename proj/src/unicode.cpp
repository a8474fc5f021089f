#include "unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "phonosim/error.hpp"

namespace phonosim::detail {

namespace {

std::string normalize_with(const icu::Normalizer2* (*instance)(UErrorCode&), std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = instance(status);
  if (U_FAILURE(status)) throw Error("unicode normalizer unavailable");
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) throw Error("unicode normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

}  // namespace

CharClass classify(char32_t c) {
  switch (c) {
    case U'\u02C8':  // primary stress
    case U'\u02CC':  // secondary stress
    case U'.':       // syllable break
    case U'|':       // minor group
    case U'\u2016':  // major group
    case U'\u203F':  // linking
      return CharClass::prosodic;
    case U'\u0361':
    case U'\u035C':
      return CharClass::tie_bar;
    default:
      break;
  }
  if (u_isUWhiteSpace(static_cast<UChar32>(c))) return CharClass::whitespace;
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_NON_SPACING_MARK:
    case U_ENCLOSING_MARK:
    case U_COMBINING_SPACING_MARK:
      return CharClass::combining;
    case U_MODIFIER_LETTER:
    case U_MODIFIER_SYMBOL:
      return CharClass::modifier;
    default:
      return CharClass::base;
  }
}

// Voice-quality notation: the brace delimiters plus the phonation and
// velopharyngeal diacritics used inside them.
bool is_voice_quality_symbol(char32_t c) {
  switch (c) {
    case U'{':
    case U'}':
    case U'\u0324':  // breathy voice
    case U'\u0330':  // creaky voice
    case U'\u034A':  // denasal
    case U'\u034B':  // nasal escape
    case U'\u034C':  // velopharyngeal friction
    case U'\u02EC':  // voicing
      return true;
    default:
      return false;
  }
}

bool is_punctuation_or_symbol(char32_t c) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK | U_GC_N_MASK)) != 0;
}

char32_t fold_case(char32_t c) {
  return static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  int32_t i = 0;
  const auto len = static_cast<int32_t>(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  while (i < len) {
    UChar32 c = 0;
    const int32_t at = i;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) throw Error("invalid UTF-8 at byte " + std::to_string(at));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) throw Error("invalid codepoint");
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string to_nfc(std::string_view s) {
  return normalize_with(&icu::Normalizer2::getNFCInstance, s);
}

std::string to_nfd(std::string_view s) {
  return normalize_with(&icu::Normalizer2::getNFDInstance, s);
}

}  // namespace phonosim::detail
