#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phonosim/corpus.hpp"
#include "phonosim/error.hpp"
#include "phonosim/ipa.hpp"

namespace phonosim {

class Registry;

using PhonemeCounts = std::map<Phoneme, std::int64_t>;

PhonemeCounts count_phonemes(std::span<const ConvertedUtterance> corpus);
PhonemeCounts count_phonemes(std::span<const Utterance> corpus, const Ruleset& rules,
                             const NormalizationPolicy& policy,
                             UnmatchedMode mode = UnmatchedMode::error,
                             const std::string& source = "<corpus>");

// Shared axis of every distribution in one analysis, sorted by codepoint.
struct GlobalVocabulary {
  std::vector<Phoneme> phonemes;

  std::size_t size() const noexcept { return phonemes.size(); }
  std::optional<std::size_t> index_of(const Phoneme& p) const;
};

GlobalVocabulary build_vocabulary(std::span<const PhonemeCounts> counts);

struct PhonemeDistribution {
  std::string language_code;
  Eigen::VectorXd probabilities;
  std::int64_t total_count = 0;
};

// Throws when a counted phoneme is missing from the vocabulary.
PhonemeDistribution to_distribution(std::string language_code, const PhonemeCounts& counts,
                                    const GlobalVocabulary& vocab);

// cos(a, b) = a·b / (‖a‖‖b‖) for nonnegative vectors, clamped to [0, 1].
// Throws on a zero vector, where the similarity is undefined.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != b.size()) throw Error("cosine similarity of vectors with different lengths");
  const Scalar norm_a = a.norm();
  const Scalar norm_b = b.norm();
  if (norm_a == Scalar(0) || norm_b == Scalar(0)) {
    throw Error("cosine similarity is undefined for a zero vector");
  }
  const Scalar value = a.dot(b) / (norm_a * norm_b);
  return std::clamp(value, Scalar(0), Scalar(1));
}

double cosine_similarity(const PhonemeDistribution& a, const PhonemeDistribution& b);

struct SimilarityMatrix {
  std::vector<std::string> codes;
  Eigen::MatrixXd values;

  std::optional<std::size_t> index_of(std::string_view code) const;
  double at(std::string_view a, std::string_view b) const;
};

// Upper triangle computed once and mirrored; diagonal set to exactly 1.
SimilarityMatrix similarity_matrix(std::span<const PhonemeDistribution> distributions);

void write_distributions_csv(std::ostream& out, const GlobalVocabulary& vocab,
                             std::span<const PhonemeDistribution> distributions);
void write_similarity_csv(std::ostream& out, const SimilarityMatrix& matrix);
SimilarityMatrix parse_similarity_csv(std::istream& in, const std::string& source = "<matrix>");

// Mean off-diagonal similarity among members of each family present in the
// matrix; families with fewer than two such members map to std::nullopt.
std::map<std::string, std::optional<double>> intra_family_mean_similarity(
    const SimilarityMatrix& matrix, const Registry& registry);

}  // namespace phonosim
