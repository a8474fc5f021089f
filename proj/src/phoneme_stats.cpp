#include "phonosim/phoneme_stats.hpp"

#include <istream>
#include <ostream>
#include <set>

#include "phonosim/registry.hpp"
#include "phonosim/text_io.hpp"

namespace phonosim {

PhonemeCounts count_phonemes(std::span<const ConvertedUtterance> corpus) {
  PhonemeCounts counts;
  for (const auto& u : corpus) {
    for (const auto& p : u.ipa) ++counts[p];
  }
  return counts;
}

PhonemeCounts count_phonemes(std::span<const Utterance> corpus, const Ruleset& rules,
                             const NormalizationPolicy& policy, UnmatchedMode mode,
                             const std::string& source) {
  const auto converted = convert_corpus(corpus, rules, policy, mode, source);
  return count_phonemes(converted);
}

std::optional<std::size_t> GlobalVocabulary::index_of(const Phoneme& p) const {
  const auto it = std::lower_bound(phonemes.begin(), phonemes.end(), p);
  if (it == phonemes.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - phonemes.begin());
}

GlobalVocabulary build_vocabulary(std::span<const PhonemeCounts> counts) {
  std::set<Phoneme> all;
  for (const auto& m : counts) {
    for (const auto& [p, n] : m) all.insert(p);
  }
  return {std::vector<Phoneme>(all.begin(), all.end())};
}

PhonemeDistribution to_distribution(std::string language_code, const PhonemeCounts& counts,
                                    const GlobalVocabulary& vocab) {
  PhonemeDistribution d;
  d.language_code = std::move(language_code);
  d.probabilities = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocab.size()));
  for (const auto& [p, n] : counts) {
    const auto idx = vocab.index_of(p);
    if (!idx) {
      throw Error("phoneme '" + p.text() + "' of language '" + d.language_code +
                  "' is not in the vocabulary");
    }
    if (n < 0) throw Error("negative count for phoneme '" + p.text() + "'");
    d.probabilities[static_cast<Eigen::Index>(*idx)] = static_cast<double>(n);
    d.total_count += n;
  }
  if (d.total_count > 0) d.probabilities /= static_cast<double>(d.total_count);
  return d;
}

double cosine_similarity(const PhonemeDistribution& a, const PhonemeDistribution& b) {
  if (a.probabilities.size() != b.probabilities.size()) {
    throw Error("distributions of '" + a.language_code + "' and '" + b.language_code +
                "' use different vocabularies");
  }
  for (const auto* d : {&a, &b}) {
    if (d->probabilities.isZero(0.0)) {
      throw Error("similarity undefined: language '" + d->language_code + "' has no phonemes");
    }
  }
  return cosine_similarity(a.probabilities, b.probabilities);
}

std::optional<std::size_t> SimilarityMatrix::index_of(std::string_view code) const {
  const auto it = std::find(codes.begin(), codes.end(), code);
  if (it == codes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - codes.begin());
}

double SimilarityMatrix::at(std::string_view a, std::string_view b) const {
  const auto i = index_of(a);
  const auto j = index_of(b);
  if (!i || !j) {
    throw Error("language '" + std::string(i ? b : a) + "' is not in the similarity matrix");
  }
  return values(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j));
}

SimilarityMatrix similarity_matrix(std::span<const PhonemeDistribution> distributions) {
  if (distributions.size() < 2) throw Error("similarity matrix needs at least two languages");
  const auto n = static_cast<Eigen::Index>(distributions.size());
  SimilarityMatrix m;
  m.values = Eigen::MatrixXd::Identity(n, n);
  for (const auto& d : distributions) m.codes.push_back(d.language_code);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = cosine_similarity(distributions[static_cast<std::size_t>(i)],
                                         distributions[static_cast<std::size_t>(j)]);
      m.values(i, j) = s;
      m.values(j, i) = s;
    }
  }
  return m;
}

void write_distributions_csv(std::ostream& out, const GlobalVocabulary& vocab,
                             std::span<const PhonemeDistribution> distributions) {
  std::vector<std::string> header{"language"};
  for (const auto& p : vocab.phonemes) header.push_back(p.text());
  out << join_csv(header) << '\n';
  for (const auto& d : distributions) {
    std::vector<std::string> row{d.language_code};
    for (Eigen::Index i = 0; i < d.probabilities.size(); ++i) {
      row.push_back(format_double(d.probabilities[i]));
    }
    out << join_csv(row) << '\n';
  }
}

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& matrix) {
  std::vector<std::string> header{""};
  header.insert(header.end(), matrix.codes.begin(), matrix.codes.end());
  out << join_csv(header) << '\n';
  for (std::size_t i = 0; i < matrix.codes.size(); ++i) {
    std::vector<std::string> row{matrix.codes[i]};
    for (std::size_t j = 0; j < matrix.codes.size(); ++j) {
      row.push_back(format_double(
          matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
    out << join_csv(row) << '\n';
  }
}

SimilarityMatrix parse_similarity_csv(std::istream& in, const std::string& source) {
  const auto lines = read_lines(in);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    rows.push_back(parse_csv_line(lines[i], source, i + 1));
    line_numbers.push_back(i + 1);
  }
  if (rows.empty()) throw ParseError(source, 1, "empty matrix file");
  SimilarityMatrix m;
  m.codes.assign(rows[0].begin() + 1, rows[0].end());
  const auto n = m.codes.size();
  if (rows.size() != n + 1) {
    throw ParseError(source, line_numbers.back(),
                     "expected " + std::to_string(n) + " data rows, found " +
                         std::to_string(rows.size() - 1));
  }
  m.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != n + 1) throw ParseError(source, line_numbers[i + 1], "wrong number of columns");
    if (row[0] != m.codes[i]) {
      throw ParseError(source, line_numbers[i + 1],
                       "row label '" + row[0] + "' does not match column '" + m.codes[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_double(row[j + 1], source, line_numbers[i + 1]);
    }
  }
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    const auto line = line_numbers[static_cast<std::size_t>(i) + 1];
    if (m.values(i, i) != 1.0) throw ParseError(source, line, "diagonal entry is not 1");
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      if (m.values(i, j) != m.values(j, i)) throw ParseError(source, line, "matrix is not symmetric");
      if (!(m.values(i, j) >= 0.0 && m.values(i, j) <= 1.0)) {
        throw ParseError(source, line, "similarity outside [0, 1]");
      }
    }
  }
  return m;
}

std::map<std::string, std::optional<double>> intra_family_mean_similarity(
    const SimilarityMatrix& matrix, const Registry& registry) {
  std::map<std::string, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < matrix.codes.size(); ++i) {
    if (const auto* rec = registry.find(matrix.codes[i])) {
      members[rec->family].push_back(static_cast<Eigen::Index>(i));
    }
  }
  std::map<std::string, std::optional<double>> out;
  for (const auto& [family, idx] : members) {
    if (idx.size() < 2) {
      out[family] = std::nullopt;
      continue;
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        sum += matrix.values(idx[a], idx[b]);
        ++pairs;
      }
    }
    out[family] = sum / static_cast<double>(pairs);
  }
  return out;
}

}  // namespace phonosim
