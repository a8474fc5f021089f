#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "phonosim/ipa.hpp"

namespace phonosim {

struct PerReport {
  std::int64_t substitutions = 0;
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t reference_length = 0;
  double per_percent = 0;  // may exceed 100 when insertions dominate

  std::int64_t errors() const noexcept { return substitutions + insertions + deletions; }
};

// Unit-cost Levenshtein distance over segments.
std::size_t edit_distance(std::span<const Phoneme> reference, std::span<const Phoneme> hypothesis);

// Error counts from one minimal alignment. When several edits tie during the
// backtrace, deletion is preferred over insertion over substitution.
// Throws on an empty reference.
PerReport per(std::span<const Phoneme> reference, std::span<const Phoneme> hypothesis);

enum class Averaging {
  micro,  // pooled counts over pooled reference length
  macro,  // mean of per-utterance rates
};

using SequencePair = std::pair<PhonemeSequence, PhonemeSequence>;

// Counts are always summed; `averaging` only decides per_percent.
PerReport corpus_per(std::span<const SequencePair> pairs, Averaging averaging = Averaging::micro);

}  // namespace phonosim
