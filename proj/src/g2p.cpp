#include "phonosim/g2p.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <tuple>

#include "phonosim/text_io.hpp"
#include "unicode.hpp"

namespace phonosim {

namespace {

std::u32string fold_all(std::u32string s) {
  for (auto& c : s) c = detail::fold_case(c);
  return s;
}

std::u32string prepare_literal(std::string_view text, bool case_fold) {
  auto cps = detail::decode_utf8(detail::to_nfc(text));
  return case_fold ? fold_all(std::move(cps)) : cps;
}

}  // namespace

ContextPattern ContextPattern::parse(std::string_view pattern, Side side, bool case_fold) {
  ContextPattern out;
  out.side_ = side;
  const std::u32string cps = prepare_literal(pattern, case_fold);
  out.source_ = detail::encode_utf8(cps);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    Element e;
    if (cps[i] == U'#') {
      e.kind = Element::Kind::boundary;
    } else if (cps[i] == U'[') {
      e.kind = Element::Kind::set;
      ++i;
      if (i < cps.size() && cps[i] == U'^') {
        e.negated = true;
        ++i;
      }
      while (i < cps.size() && cps[i] != U']') e.members.push_back(cps[i++]);
      if (i == cps.size()) throw Error("unterminated grapheme class in context '" + out.source_ + "'");
      if (e.members.empty()) throw Error("empty grapheme class in context '" + out.source_ + "'");
    } else if (cps[i] == U']') {
      throw Error("unbalanced ']' in context '" + out.source_ + "'");
    } else {
      e.members.push_back(cps[i]);
    }
    out.elements_.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < out.elements_.size(); ++i) {
    if (out.elements_[i].kind != Element::Kind::boundary) continue;
    const bool outermost = side == Side::left ? i == 0 : i + 1 == out.elements_.size();
    if (!outermost) {
      throw Error("word boundary '#' must be the outermost element of context '" + out.source_ + "'");
    }
  }
  return out;
}

bool ContextPattern::element_matches(const Element& e, char32_t c) const {
  if (c == U' ') return false;  // contexts never reach across words
  const bool member = e.members.find(c) != std::u32string::npos;
  return e.negated ? !member : member;
}

bool ContextPattern::matches(std::u32string_view text, std::size_t begin, std::size_t end) const {
  if (side_ == Side::left) {
    std::size_t pos = begin;
    for (auto it = elements_.rbegin(); it != elements_.rend(); ++it) {
      if (it->kind == Element::Kind::boundary) {
        if (pos != 0 && text[pos - 1] != U' ') return false;
        continue;
      }
      if (pos == 0 || !element_matches(*it, text[pos - 1])) return false;
      --pos;
    }
    return true;
  }
  std::size_t pos = end;
  for (const auto& e : elements_) {
    if (e.kind == Element::Kind::boundary) {
      if (pos != text.size() && text[pos] != U' ') return false;
      continue;
    }
    if (pos >= text.size() || !element_matches(e, text[pos])) return false;
    ++pos;
  }
  return true;
}

UnmatchedMode parse_unmatched_mode(std::string_view name) {
  if (name == "error") return UnmatchedMode::error;
  if (name == "skip") return UnmatchedMode::skip;
  if (name == "passthrough") return UnmatchedMode::passthrough;
  throw Error("unknown unmatched-grapheme mode '" + std::string(name) + "'");
}

Ruleset::Ruleset(std::string language_code, std::vector<G2PRule> rules, bool case_fold,
                 bool punctuation_strip)
    : language_code_(std::move(language_code)),
      rules_(std::move(rules)),
      case_fold_(case_fold),
      punctuation_strip_(punctuation_strip) {
  if (rules_.empty()) throw Error("ruleset '" + language_code_ + "' has no rules");

  std::set<std::tuple<std::u32string, std::string, std::string>> seen;
  compiled_.reserve(rules_.size());
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& rule = rules_[i];
    Compiled c;
    c.grapheme = prepare_literal(rule.grapheme, case_fold_);
    if (c.grapheme.empty()) throw Error("rule " + std::to_string(i + 1) + " has an empty grapheme");
    if (!rule.left_context.empty()) {
      c.left = ContextPattern::parse(rule.left_context, ContextPattern::Side::left, case_fold_);
    }
    if (!rule.right_context.empty()) {
      c.right = ContextPattern::parse(rule.right_context, ContextPattern::Side::right, case_fold_);
    }
    auto key = std::make_tuple(c.grapheme, c.left ? c.left->source() : std::string{},
                               c.right ? c.right->source() : std::string{});
    if (!seen.insert(std::move(key)).second) {
      throw Error("duplicate rule for grapheme '" + rule.grapheme + "' with the same contexts");
    }
    for (char32_t ch : c.grapheme) {
      if (detail::is_punctuation_or_symbol(ch) &&
          protected_chars_.find(ch) == std::u32string::npos) {
        protected_chars_.push_back(ch);
      }
    }
    by_first_char_[c.grapheme.front()].push_back(i);
    compiled_.push_back(std::move(c));
  }
}

std::u32string Ruleset::prepare(std::string_view text, std::vector<std::size_t>& offsets) const {
  const std::u32string raw = detail::decode_utf8(detail::to_nfc(text));
  std::u32string out;
  offsets.clear();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char32_t c = raw[i];
    const bool blank = detail::classify(c) == detail::CharClass::whitespace ||
                       (punctuation_strip_ && detail::is_punctuation_or_symbol(c) &&
                        protected_chars_.find(c) == std::u32string::npos);
    if (blank) {
      if (!out.empty() && out.back() != U' ') {
        out.push_back(U' ');
        offsets.push_back(i);
      }
      continue;
    }
    out.push_back(case_fold_ ? detail::fold_case(c) : c);
    offsets.push_back(i);
  }
  if (!out.empty() && out.back() == U' ') {
    out.pop_back();
    offsets.pop_back();
  }
  return out;
}

PhonemeSequence Ruleset::transliterate(std::string_view text, const NormalizationPolicy& policy,
                                       UnmatchedMode mode) const {
  std::vector<std::size_t> offsets;
  const std::u32string input = prepare(text, offsets);
  std::string ipa;

  std::size_t pos = 0;
  while (pos < input.size()) {
    if (input[pos] == U' ') {
      ipa += ' ';
      ++pos;
      continue;
    }
    const Compiled* best = nullptr;
    std::size_t best_index = 0;
    if (const auto bucket = by_first_char_.find(input[pos]); bucket != by_first_char_.end()) {
      for (std::size_t idx : bucket->second) {
        const auto& c = compiled_[idx];
        const std::size_t end = pos + c.grapheme.size();
        if (end > input.size() ||
            std::u32string_view(input).substr(pos, c.grapheme.size()) != c.grapheme) {
          continue;
        }
        if (c.left && !c.left->matches(input, pos, end)) continue;
        if (c.right && !c.right->matches(input, pos, end)) continue;
        // Bucket order is rule order, so strict comparisons keep the earlier rule on ties.
        if (!best || c.grapheme.size() > best->grapheme.size() ||
            (c.grapheme.size() == best->grapheme.size() &&
             rules_[idx].priority > rules_[best_index].priority)) {
          best = &c;
          best_index = idx;
        }
      }
    }
    if (best) {
      ipa += rules_[best_index].output;
      pos += best->grapheme.size();
      continue;
    }
    switch (mode) {
      case UnmatchedMode::error:
        throw G2PError(offsets[pos], detail::encode_utf8(std::u32string(1, input[pos])));
      case UnmatchedMode::skip:
        break;
      case UnmatchedMode::passthrough:
        ipa += detail::encode_utf8(std::u32string(1, input[pos]));
        break;
    }
    ++pos;
  }

  PhonemeSequence segments;
  try {
    segments = tokenize_ipa(ipa);
  } catch (const OffsetError& e) {
    throw Error("rule output '" + ipa + "' is not valid IPA: " + e.what());
  }
  return normalize(segments, policy);
}

Ruleset parse_ruleset(std::istream& in, const std::string& source, std::string default_language) {
  std::string language = std::move(default_language);
  bool case_fold = true;
  bool punctuation_strip = true;
  std::vector<G2PRule> rules;
  std::vector<std::size_t> rule_lines;

  const auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string& line = lines[i];
    if (trim(line).empty() || line.front() == '#') continue;
    if (line.front() == '@') {
      const auto body = trim(std::string_view(line).substr(1));
      const auto space = body.find_first_of(" \t");
      const auto key = body.substr(0, space);
      const auto value = space == std::string_view::npos ? std::string_view{} : trim(body.substr(space));
      if (key == "language") {
        if (value.empty()) throw ParseError(source, line_no, "@language needs a value");
        language = std::string(value);
      } else if (key == "case_fold") {
        case_fold = parse_bool(value, source, line_no);
      } else if (key == "punctuation_strip") {
        punctuation_strip = parse_bool(value, source, line_no);
      } else {
        throw ParseError(source, line_no, "unknown directive '@" + std::string(key) + "'");
      }
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 5) {
      throw ParseError(source, line_no, "expected 2 to 5 tab-separated fields");
    }
    G2PRule rule;
    rule.grapheme = fields[0];
    if (rule.grapheme.empty()) throw ParseError(source, line_no, "empty grapheme");
    rule.output = fields[1];
    if (fields.size() > 2) rule.left_context = std::string(trim(fields[2]));
    if (fields.size() > 3) rule.right_context = std::string(trim(fields[3]));
    if (fields.size() > 4 && !trim(fields[4]).empty()) {
      rule.priority = static_cast<int>(parse_integer(fields[4], source, line_no));
    }
    rules.push_back(std::move(rule));
    rule_lines.push_back(line_no);
  }
  if (rules.empty()) throw ParseError(source, lines.size(), "rule file contains no rules");

  // Re-run per-rule checks so errors carry the offending line.
  for (std::size_t i = 0; i < rules.size(); ++i) {
    try {
      Ruleset probe(language, {rules[i]}, case_fold, punctuation_strip);
    } catch (const Error& e) {
      throw ParseError(source, rule_lines[i], e.what());
    }
  }
  try {
    return Ruleset(language, rules, case_fold, punctuation_strip);
  } catch (const Error& e) {
    // Only duplicates remain; locate the second occurrence.
    for (std::size_t j = 1; j < rules.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        try {
          Ruleset pair(language, {rules[i], rules[j]}, case_fold, punctuation_strip);
        } catch (const Error& dup) {
          throw ParseError(source, rule_lines[j],
                           std::string(dup.what()) + " (first at line " +
                               std::to_string(rule_lines[i]) + ")");
        }
      }
    }
    throw ParseError(source, lines.size(), e.what());
  }
}

Ruleset load_ruleset(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string stem = path.filename().string();
  stem = stem.substr(0, stem.find('.'));
  return parse_ruleset(in, path.string(), stem);
}

}  // namespace phonosim
