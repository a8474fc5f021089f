#pragma once

// Seeded random inputs for the property tests, plus a reference greedy
// transducer for the toy rulesets generated here.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phonosim/error.hpp"
#include "phonosim/g2p.hpp"
#include "phonosim/ipa.hpp"

namespace gen {

inline const std::vector<std::string>& ipa_bases() {
  static const std::vector<std::string> v{"a", "e", "i", "o", "u", "p", "t", "k", "s", "z", "m",
                                          "n", "ʃ", "ʒ", "ə", "ɨ", "ɲ", "ʁ", "χ", "β"};
  return v;
}

// Modifier letters and combining marks that attach to a preceding base.
inline const std::vector<std::string>& ipa_attachments() {
  static const std::vector<std::string> v{"ʲ", "ː", "ʰ", "ʷ", "̃", "̥", "̩",
                                          "̤", "̰", "̞", "˞"};
  return v;
}

inline const std::vector<std::string>& ipa_prosodic() {
  static const std::vector<std::string> v{"ˈ", "ˌ", ".", "|"};
  return v;
}

// A well-formed IPA string: every attachment follows a base.
inline std::string ipa_string(oracle::Rng& rng, int max_segments = 12) {
  std::string s;
  const int n = rng.integer(0, max_segments);
  for (int i = 0; i < n; ++i) {
    const int kind = rng.integer(0, 9);
    if (kind == 0) {
      s += rng.pick(ipa_prosodic());
      continue;
    }
    if (kind == 1) {
      s += ' ';
      continue;
    }
    if (kind == 2) {
      s += "{";
      continue;
    }
    if (kind == 3) {
      s += "}";
      continue;
    }
    s += rng.pick(ipa_bases());
    if (rng.coin(0.15)) s += (rng.coin() ? "͡" : "͜") + rng.pick(ipa_bases());
    const int marks = rng.integer(0, 2);
    for (int m = 0; m < marks; ++m) s += rng.pick(ipa_attachments());
    if (rng.coin(0.1)) s += rng.coin() ? "sʲ" : "zʲ";
  }
  return s;
}

inline char32_t codepoint_of(const std::string& utf8) {
  const std::string& cps = utf8;
  // Only single-codepoint strings are passed here.
  const auto c0 = static_cast<unsigned char>(cps[0]);
  if (c0 < 0x80) return c0;
  if ((c0 & 0xE0) == 0xC0) return ((c0 & 0x1F) << 6) | (static_cast<unsigned char>(cps[1]) & 0x3F);
  return ((c0 & 0x0F) << 12) | ((static_cast<unsigned char>(cps[1]) & 0x3F) << 6) |
         (static_cast<unsigned char>(cps[2]) & 0x3F);
}

// A random policy that passes validate(); invalid draws are redrawn.
inline phonosim::NormalizationPolicy policy(oracle::Rng& rng) {
  static const std::vector<std::string> strippable{"ˈ", "ˌ", ".", "ː", "ʰ", "ʲ", "ʷ", "̃",
                                                   "̥", "̩", "̞"};
  static const std::vector<std::string> merge_candidates{"sʲ", "zʲ", "ʃ", "ʒ", "tʰ", "t", "a",
                                                         "aː", "ə", "e", "ɨ", "i", "n", "ɲ"};
  for (;;) {
    phonosim::NormalizationPolicy p;
    p.strip_stress = rng.coin();
    p.strip_voqs = rng.coin();
    p.strip_diacritics.clear();
    for (const auto& s : strippable)
      if (rng.coin(0.3)) p.strip_diacritics.insert(codepoint_of(s));
    p.merge_pairs.clear();
    const int merges = rng.integer(0, 4);
    for (int m = 0; m < merges; ++m) {
      const auto& from = rng.pick(merge_candidates);
      const auto& to = rng.pick(merge_candidates);
      if (from != to) p.merge_pairs.insert_or_assign(phonosim::Phoneme(from), phonosim::Phoneme(to));
    }
    try {
      p.validate();
      return p;
    } catch (const phonosim::Error&) {
    }
  }
}

// Toy orthography: graphemes over {a, b, c, d}, outputs single IPA segments,
// contexts limited to one element so the reference transducer stays simple.
inline const std::string kToyAlphabet = "abcd";

struct ToyCase {
  std::vector<phonosim::G2PRule> rules;
  std::string text;
};

inline std::string toy_word(oracle::Rng& rng, int min_len, int max_len) {
  std::string w;
  const int n = rng.integer(min_len, max_len);
  for (int i = 0; i < n; ++i) w += kToyAlphabet[static_cast<std::size_t>(rng.integer(0, 3))];
  return w;
}

inline std::string toy_context(oracle::Rng& rng) {
  switch (rng.integer(0, 6)) {
    case 0:
      return std::string(1, kToyAlphabet[static_cast<std::size_t>(rng.integer(0, 3))]);
    case 1:
      return "[" + toy_word(rng, 1, 2) + "]";
    case 2:
      return "[^" + toy_word(rng, 1, 1) + "]";
    case 3:
      return "#";
    default:
      return "";
  }
}

inline ToyCase toy_case(oracle::Rng& rng) {
  static const std::vector<std::string> outputs{"p", "t", "k", "a", "i", "u", "t͡ʃ", "ʃ", "ŋ", "ə"};
  ToyCase tc;
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  const int n = rng.integer(1, 10);
  for (int i = 0; i < n; ++i) {
    phonosim::G2PRule r;
    r.grapheme = toy_word(rng, 1, 3);
    r.output = rng.pick(outputs);
    if (rng.coin(0.3)) r.left_context = toy_context(rng);
    if (rng.coin(0.3)) r.right_context = toy_context(rng);
    r.priority = rng.integer(0, 2);
    if (!keys.insert({r.grapheme, r.left_context, r.right_context}).second) continue;
    tc.rules.push_back(r);
  }
  const int words = rng.integer(0, 3);
  for (int w = 0; w < words; ++w) {
    if (w) tc.text += ' ';
    tc.text += toy_word(rng, 1, 6);
  }
  return tc;
}

// Single-element context check on lowercase ASCII text.
inline bool context_ok(const std::string& ctx, const std::string& text, long pos) {
  if (ctx.empty()) return true;
  const bool outside = pos < 0 || pos >= static_cast<long>(text.size());
  const char c = outside ? ' ' : text[static_cast<std::size_t>(pos)];
  if (ctx == "#") return c == ' ';
  if (c == ' ') return false;
  if (ctx.size() == 1) return ctx[0] == c;
  if (ctx.rfind("[^", 0) == 0) return ctx.substr(2, ctx.size() - 3).find(c) == std::string::npos;
  return ctx.substr(1, ctx.size() - 2).find(c) != std::string::npos;
}

// Reference greedy transducer: at each position scan every rule, keep the
// longest grapheme, then the higher priority, then the earlier rule.
// Returns the concatenated raw output, or the offset of the first unmatched
// character in error mode.
struct Transduced {
  std::string ipa;
  std::optional<std::size_t> error_offset;
};

inline Transduced transduce(const std::vector<phonosim::G2PRule>& rules, const std::string& text,
                            phonosim::UnmatchedMode mode) {
  Transduced out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == ' ') {
      out.ipa += ' ';
      ++pos;
      continue;
    }
    int best = -1;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto& r = rules[i];
      if (text.compare(pos, r.grapheme.size(), r.grapheme) != 0) continue;
      if (!context_ok(r.left_context, text, static_cast<long>(pos) - 1)) continue;
      if (!context_ok(r.right_context, text, static_cast<long>(pos + r.grapheme.size()))) continue;
      if (best < 0) {
        best = static_cast<int>(i);
        continue;
      }
      const auto& b = rules[static_cast<std::size_t>(best)];
      if (r.grapheme.size() > b.grapheme.size() ||
          (r.grapheme.size() == b.grapheme.size() && r.priority > b.priority)) {
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      const auto& r = rules[static_cast<std::size_t>(best)];
      out.ipa += r.output;
      pos += r.grapheme.size();
      continue;
    }
    if (mode == phonosim::UnmatchedMode::error) {
      out.error_offset = pos;
      return out;
    }
    if (mode == phonosim::UnmatchedMode::passthrough) out.ipa += text[pos];
    ++pos;
  }
  return out;
}

}  // namespace gen
