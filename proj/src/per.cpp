#include "phonosim/per.hpp"

#include <algorithm>

#include "phonosim/error.hpp"

namespace phonosim {

namespace {

using Table = std::vector<std::vector<std::int64_t>>;

Table distance_table(std::span<const Phoneme> ref, std::span<const Phoneme> hyp) {
  Table d(ref.size() + 1, std::vector<std::int64_t>(hyp.size() + 1, 0));
  for (std::size_t i = 0; i <= ref.size(); ++i) d[i][0] = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= hyp.size(); ++j) d[0][j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::int64_t diag = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, diag});
    }
  }
  return d;
}

}  // namespace

std::size_t edit_distance(std::span<const Phoneme> reference, std::span<const Phoneme> hypothesis) {
  return static_cast<std::size_t>(distance_table(reference, hypothesis).back().back());
}

PerReport per(std::span<const Phoneme> reference, std::span<const Phoneme> hypothesis) {
  if (reference.empty()) throw Error("PER is undefined for an empty reference");
  const Table d = distance_table(reference, hypothesis);

  PerReport report;
  report.reference_length = static_cast<std::int64_t>(reference.size());
  std::size_t i = reference.size();
  std::size_t j = hypothesis.size();
  while (i > 0 || j > 0) {
    if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++report.deletions;
      --i;
    } else if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      ++report.insertions;
      --j;
    } else {
      if (reference[i - 1] != hypothesis[j - 1]) ++report.substitutions;
      --i;
      --j;
    }
  }
  report.per_percent = 100.0 * static_cast<double>(report.errors()) /
                       static_cast<double>(report.reference_length);
  return report;
}

PerReport corpus_per(std::span<const SequencePair> pairs, Averaging averaging) {
  if (pairs.empty()) throw Error("corpus PER needs at least one utterance pair");
  PerReport total;
  double rate_sum = 0;
  for (const auto& [ref, hyp] : pairs) {
    const auto r = per(ref, hyp);
    total.substitutions += r.substitutions;
    total.insertions += r.insertions;
    total.deletions += r.deletions;
    total.reference_length += r.reference_length;
    rate_sum += r.per_percent;
  }
  total.per_percent = averaging == Averaging::micro
                          ? 100.0 * static_cast<double>(total.errors()) /
                                static_cast<double>(total.reference_length)
                          : rate_sum / static_cast<double>(pairs.size());
  return total;
}

}  // namespace phonosim
