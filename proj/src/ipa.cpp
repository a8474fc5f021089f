#include "phonosim/ipa.hpp"

#include <istream>
#include <optional>

#include "phonosim/error.hpp"
#include "phonosim/text_io.hpp"
#include "unicode.hpp"

namespace phonosim {

using detail::CharClass;

Phoneme::Phoneme(std::string_view text) : text_(detail::to_nfc(text)) {
  if (text_.empty()) throw Error("empty phoneme");
}

bool is_stress_mark(char32_t c) { return c == U'ˈ' || c == U'ˌ'; }

PhonemeSequence tokenize_ipa(std::string_view ipa) {
  const std::u32string text = detail::decode_utf8(detail::to_nfc(ipa));
  PhonemeSequence out;
  std::u32string current;
  bool awaiting_tied_base = false;

  const auto flush = [&] {
    if (!current.empty()) out.emplace_back(detail::encode_utf8(current));
    current.clear();
    awaiting_tied_base = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    switch (detail::classify(c)) {
      case CharClass::whitespace:
        flush();
        break;
      case CharClass::prosodic:
        flush();
        out.emplace_back(detail::encode_utf8(std::u32string(1, c)));
        break;
      case CharClass::base:
        if (awaiting_tied_base) {
          current.push_back(c);
          awaiting_tied_base = false;
        } else {
          flush();
          current.push_back(c);
        }
        break;
      case CharClass::tie_bar:
        if (current.empty()) throw OffsetError(i, "tie bar without a preceding base");
        current.push_back(c);
        awaiting_tied_base = true;
        break;
      case CharClass::combining:
      case CharClass::modifier:
        if (current.empty()) throw OffsetError(i, "diacritic without a preceding base");
        current.push_back(c);
        break;
    }
  }
  flush();
  return out;
}

std::string join_phonemes(const PhonemeSequence& seq, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += sep;
    out += seq[i].text();
  }
  return out;
}

std::set<char32_t> NormalizationPolicy::default_strip_diacritics() {
  return {U'ˈ', U'ˌ', U'.'};
}

std::map<Phoneme, Phoneme> NormalizationPolicy::default_merge_pairs() {
  return {
      {Phoneme("sʲ"), Phoneme("ʃ")},  // sʲ -> ʃ
      {Phoneme("zʲ"), Phoneme("ʒ")},  // zʲ -> ʒ
  };
}

namespace {

// Stripping step of normalize: std::nullopt when the segment vanishes.
std::optional<std::string> strip_segment(const Phoneme& seg, const NormalizationPolicy& policy) {
  const std::u32string cps = detail::decode_utf8(detail::to_nfd(seg.text()));
  if (policy.strip_stress && cps.size() == 1 && is_stress_mark(cps[0])) return std::nullopt;

  std::u32string kept;
  kept.reserve(cps.size());
  for (char32_t c : cps) {
    if (policy.strip_voqs && detail::is_voice_quality_symbol(c)) continue;
    if (policy.strip_diacritics.count(c)) continue;
    kept.push_back(c);
  }
  if (kept.empty()) return std::nullopt;
  // Marks whose base was removed go with it.
  const auto head = detail::classify(kept.front());
  if (head != CharClass::base && head != CharClass::prosodic) return std::nullopt;
  return detail::to_nfc(detail::encode_utf8(kept));
}

}  // namespace

PhonemeSequence normalize(const PhonemeSequence& seq, const NormalizationPolicy& policy) {
  PhonemeSequence out;
  out.reserve(seq.size());
  for (const auto& seg : seq) {
    auto text = strip_segment(seg, policy);
    if (!text) continue;
    Phoneme p(*text);
    if (const auto it = policy.merge_pairs.find(p); it != policy.merge_pairs.end()) {
      out.push_back(it->second);
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

void NormalizationPolicy::validate() const {
  for (char32_t c : strip_diacritics) {
    const auto cls = detail::classify(c);
    if (cls == CharClass::base || cls == CharClass::tie_bar || cls == CharClass::whitespace) {
      throw Error("cannot strip base symbol or tie bar '" + detail::encode_utf8(std::u32string(1, c)) +
                  "'");
    }
  }
  for (const auto& [source, target] : merge_pairs) {
    if (merge_pairs.count(target)) {
      throw Error("merge target '" + target.text() + "' is also a merge source");
    }
    const auto segs = tokenize_ipa(target.text());
    if (segs.size() != 1) {
      throw Error("merge target '" + target.text() + "' is not a single segment");
    }
    const auto stripped = strip_segment(target, *this);
    if (!stripped || *stripped != target.text()) {
      throw Error("merge target '" + target.text() + "' is altered by the stripping rules");
    }
  }
}

namespace {

char32_t parse_codepoint(std::string_view token, const std::string& source, std::size_t line) {
  if (token.size() > 2 && (token.substr(0, 2) == "U+" || token.substr(0, 2) == "u+")) {
    const auto hex = std::string(token.substr(2));
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(hex, &used, 16);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != hex.size() || value > 0x10FFFF) {
      throw ParseError(source, line, "invalid codepoint '" + std::string(token) + "'");
    }
    return static_cast<char32_t>(value);
  }
  const auto cps = detail::decode_utf8(detail::to_nfd(token));
  if (cps.size() != 1) {
    throw ParseError(source, line, "expected a single codepoint, got '" + std::string(token) + "'");
  }
  return cps[0];
}

}  // namespace

NormalizationPolicy parse_policy(std::istream& in, const std::string& source) {
  NormalizationPolicy policy;
  std::map<Phoneme, Phoneme> extra_merges;
  bool keep_default_merges = true;
  bool in_merge = false;

  const auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[merge]") {
        in_merge = true;
        continue;
      }
      throw ParseError(source, line_no, "unknown section " + std::string(line));
    }
    if (in_merge) {
      const auto fields = split(line, '\t');
      if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
        throw ParseError(source, line_no, "expected 'source<TAB>target'");
      }
      try {
        extra_merges.insert_or_assign(Phoneme(trim(fields[0])), Phoneme(trim(fields[1])));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(source, line_no, e.what());
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "strip_stress") {
      policy.strip_stress = parse_bool(value, source, line_no);
    } else if (key == "strip_voqs") {
      policy.strip_voqs = parse_bool(value, source, line_no);
    } else if (key == "strip_diacritics") {
      policy.strip_diacritics.clear();
      for (const auto& tok : split_whitespace(value)) {
        policy.strip_diacritics.insert(parse_codepoint(tok, source, line_no));
      }
    } else if (key == "default_merges") {
      keep_default_merges = parse_bool(value, source, line_no);
    } else {
      throw ParseError(source, line_no, "unknown key '" + std::string(key) + "'");
    }
  }

  if (!keep_default_merges) policy.merge_pairs.clear();
  for (auto& [from, to] : extra_merges) policy.merge_pairs.insert_or_assign(from, to);
  try {
    policy.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return policy;
}

NormalizationPolicy load_policy(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_policy(in, path.string());
}

}  // namespace phonosim
