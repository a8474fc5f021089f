#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "phonosim/selection.hpp"

using namespace phonosim;

namespace {

std::vector<std::string> codes_of(const SelectionResult& r) {
  std::vector<std::string> out;
  for (const auto& s : r.sources) out.push_back(s.code);
  return out;
}

using Strings = std::vector<std::string>;

SimilarityMatrix toy_matrix() {
  SimilarityMatrix m;
  m.codes = {"t", "a", "b", "c"};
  m.values.resize(4, 4);
  m.values << 1, 0.9, 0.5, 0.7,  //
      0.9, 1, 0.2, 0.3,          //
      0.5, 0.2, 1, 0.4,          //
      0.7, 0.3, 0.4, 1;
  return m;
}

Registry table1() { return load_registry(PHONOSIM_DATA_DIR "/table1_registry.csv"); }

PhonemeSequence seq(std::initializer_list<const char*> items) {
  PhonemeSequence s;
  for (const char* p : items) s.emplace_back(p);
  return s;
}

}  // namespace

TEST_CASE("top-k sorts by similarity") {
  const auto m = toy_matrix();
  CHECK(codes_of(select_top_k("t", m, 3)) == Strings{"a", "c", "b"});
  CHECK(codes_of(select_top_k("t", m, 1)) == Strings{"a"});
  CHECK(*select_top_k("t", m, 1).sources[0].score == 0.9);
  CHECK_THROWS_AS(select_top_k("zz", m, 1), Error);
  CHECK_THROWS_AS(select_top_k("t", m, 0), Error);
}

TEST_CASE("k beyond the candidates is truncated with a warning") {
  const auto r = select_top_k("t", toy_matrix(), 4);
  CHECK(r.sources.size() == 3);
  CHECK(r.warnings.size() == 1);
  CHECK(select_top_k("t", toy_matrix(), 3).warnings.empty());
}

TEST_CASE("ties go to more hours then to the smaller code") {
  SimilarityMatrix m;
  m.codes = {"a", "b", "c", "t"};
  m.values = Eigen::MatrixXd::Constant(4, 4, 0.5);
  m.values.diagonal().setOnes();
  const Registry reg({{"a", "A", "F", std::nullopt, 1}, {"b", "B", "F", std::nullopt, 9},
                      {"c", "C", "F", std::nullopt, 1}, {"t", "T", "F", std::nullopt, 1}});
  CHECK(codes_of(select_top_k("t", m, 3, &reg)) == Strings{"b", "a", "c"});
  CHECK(codes_of(select_top_k("t", m, 3)) == Strings{"a", "b", "c"});
}

TEST_CASE("top-k agrees with the scan oracle and the best subset") {
  oracle::Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(2, 12);
    SimilarityMatrix m;
    oracle::Vec hours;
    std::vector<LanguageRecord> recs;
    for (int i = 0; i < n; ++i) {
      m.codes.push_back("l" + std::to_string(i));
      hours.push_back(rng.integer(1, 3));
      recs.push_back({m.codes.back(), "", "F", std::nullopt, hours.back()});
    }
    m.values.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m.values(i, j) = m.values(j, i) = i == j ? 1.0 : rng.integer(0, 4) / 4.0;
    const Registry reg(recs);
    const int target = rng.integer(0, n - 1);
    const int k = rng.integer(1, n);
    oracle::Vec scores, cand_hours;
    Strings cand;
    for (int j = 0; j < n; ++j) {
      if (j == target) continue;
      cand.push_back(m.codes[static_cast<std::size_t>(j)]);
      scores.push_back(m.values(target, j));
      cand_hours.push_back(hours[static_cast<std::size_t>(j)]);
    }
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), cand.size());
    const auto r = select_top_k(m.codes[static_cast<std::size_t>(target)], m, k, &reg);
    CHECK(codes_of(r) == oracle::top_k(cand, scores, cand_hours, take));
    double sum = 0;
    for (const auto& s : r.sources) sum += *s.score;
    CHECK(sum == doctest::Approx(oracle::best_subset_sum(scores, take)).epsilon(1e-12));
    // k = 2 is a prefix of k = 3.
    const auto r2 = codes_of(select_top_k(m.codes[static_cast<std::size_t>(target)], m, 2, &reg));
    const auto r3 = codes_of(select_top_k(m.codes[static_cast<std::size_t>(target)], m, 3, &reg));
    CHECK(std::equal(r2.begin(), r2.end(), r3.begin()));
  }
}

TEST_CASE("strategies on the table 1 registry") {
  const auto reg = table1();
  const auto fam = select_strategy("sah", Strategy::family, reg);
  CHECK(fam.sources.size() == 8);
  for (const auto& s : fam.sources) CHECK(reg.at(s.code).family == "Turkic");
  CHECK(select_strategy("hi", Strategy::all, reg).sources.size() == 21);
  CHECK(select_strategy("hi", Strategy::monolingual, reg).sources.empty());
  CHECK_THROWS_AS(select_strategy("hi", Strategy::corpus_sim, reg), Error);
  CHECK_THROWS_AS(select_strategy("xx", Strategy::all, reg), Error);
  CHECK_THROWS_AS(parse_strategy("best"), Error);
  CHECK(parse_strategy("corpus_sim") == Strategy::corpus_sim);
}

TEST_CASE("inventories are unions over the scope") {
  PhonemeSets sets;
  sets["A"] = {Phoneme("a"), Phoneme("b")};
  sets["B"] = {Phoneme("b"), Phoneme("c")};
  CHECK(build_inventory({"A", "B"}, sets).phonemes == std::set<Phoneme>{Phoneme("a"), Phoneme("b"), Phoneme("c")});
  CHECK(build_inventory({"A"}, sets).phonemes == sets["A"]);
  CHECK_THROWS_AS(build_inventory({"A", "Z"}, sets), Error);

  oracle::Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    PhonemeSets random;
    std::vector<std::set<Phoneme>> parts;
    std::vector<std::string> scope;
    for (int i = 0; i < 4; ++i) {
      std::set<Phoneme> s;
      for (int j = 0; j < rng.integer(0, 6); ++j) s.insert(Phoneme(std::string(1, static_cast<char>('a' + rng.integer(0, 12)))));
      const std::string code = "x" + std::to_string(i);
      random[code] = s;
      parts.push_back(s);
      scope.push_back(code);
    }
    CHECK(build_inventory(scope, random).phonemes == oracle::set_union(parts));
  }
}

TEST_CASE("manifests") {
  const Registry reg({{"t", "T", "F", std::nullopt, 2}, {"a", "A", "F", std::nullopt, 10},
                      {"b", "B", "G", std::nullopt, 5}, {"c", "C", "G", std::nullopt, 1}});
  ConvertedCorpora corpora;
  corpora["t"] = {{"t1.mp3", seq({"a", "b"})}};
  corpora["a"] = {{"a1.mp3", seq({"a", "ʃ"})}, {"a2.mp3", seq({"b"})}};
  corpora["b"] = {{"b1.mp3", seq({"t͡ʃ"})}};
  corpora["c"] = {{"c1.mp3", seq({"x"})}};

  const auto mono = emit_manifest(select_strategy("t", Strategy::monolingual, reg), corpora, reg);
  CHECK(mono.languages == Strings{"t"});
  CHECK(mono.utterances.size() == 1);
  CHECK(mono.inventory.phonemes == std::set<Phoneme>{Phoneme("a"), Phoneme("b")});
  CHECK(mono.total_hours == 2);

  SimilarityMatrix m;
  m.codes = {"a", "b", "c", "t"};
  m.values.setIdentity(4, 4);
  m.values(3, 0) = m.values(0, 3) = 0.9;
  m.values(3, 1) = m.values(1, 3) = 0.8;
  m.values(3, 2) = m.values(2, 3) = 0.1;
  const auto sel = select_strategy("t", Strategy::corpus_sim, reg, &m, 3);
  const auto full = emit_manifest(sel, corpora, reg);
  CHECK(full.languages == Strings{"t", "a", "b", "c"});
  CHECK(full.utterances.size() == 5);
  CHECK(full.utterances.front().language == "t");
  CHECK(full.utterances.back().language == "c");
  CHECK(full.total_hours == 18);

  // An inventory that misses a transcribed phoneme is a validation error.
  PhonemeSets narrow = phoneme_sets(corpora);
  narrow["a"].erase(Phoneme("ʃ"));
  try {
    emit_manifest(sel, corpora, reg, &narrow);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("a1.mp3") != std::string::npos);
    CHECK(what.find("ʃ") != std::string::npos);
  }

  std::ostringstream out;
  write_manifest(out, full);
  CHECK(out.str().rfind("# target: t\n", 0) == 0);
  CHECK(out.str().find("a\ta1.mp3\ta ʃ\n") != std::string::npos);
}
