#include <doctest.h>

#include "oracles.hpp"
#include "phonosim/error.hpp"
#include "phonosim/per.hpp"

using namespace phonosim;

namespace {

PhonemeSequence seq(std::initializer_list<const char*> items) {
  PhonemeSequence s;
  for (const char* p : items) s.emplace_back(p);
  return s;
}

PhonemeSequence random_seq(oracle::Rng& rng, int max_len) {
  static const std::vector<std::string> alphabet{"a", "b", "t͡ʃ", "dʲ", "e"};
  PhonemeSequence s;
  for (int i = rng.integer(0, max_len); i > 0; --i) s.emplace_back(rng.pick(alphabet));
  return s;
}

}  // namespace

TEST_CASE("identity and single substitution") {
  const auto ref = seq({"a", "b", "c", "d"});
  CHECK(per(ref, ref).per_percent == 0.0);
  const auto r = per(ref, seq({"a", "x", "c", "d"}));
  CHECK(r.substitutions == 1);
  CHECK(r.errors() == 1);
  CHECK(r.per_percent == 25.0);
  CHECK_THROWS_AS(per({}, ref), Error);
}

TEST_CASE("multi-codepoint phonemes are single edits") {
  const auto r = per(seq({"t͡ʃ", "a"}), seq({"k", "a"}));
  CHECK(r.errors() == 1);
  CHECK(r.substitutions == 1);
}

TEST_CASE("insertions and deletions") {
  const auto ins = per(seq({"a"}), seq({"a", "b", "b"}));
  CHECK(ins.insertions == 2);
  CHECK(ins.per_percent == 200.0);
  const auto del = per(seq({"a", "b"}), {});
  CHECK(del.deletions == 2);
}

TEST_CASE("ties prefer deletion then insertion") {
  // ab -> ba: distance 2, reachable as two substitutions or one deletion and
  // one insertion.
  const auto r = per(seq({"a", "b"}), seq({"b", "a"}));
  CHECK(r.errors() == 2);
  CHECK(r.deletions == 1);
  CHECK(r.insertions == 1);
  CHECK(r.substitutions == 0);
}

TEST_CASE("edit distance matches the recursive oracle") {
  oracle::Rng rng(55);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_seq(rng, 8);
    const auto b = random_seq(rng, 8);
    const auto d = edit_distance(a, b);
    CHECK(d == oracle::edit_distance(a, b));
    CHECK(d == edit_distance(b, a));
    if (!a.empty()) {
      const auto r = per(a, b);
      CHECK(static_cast<std::size_t>(r.errors()) == d);
      CHECK(r.reference_length == static_cast<std::int64_t>(a.size()));
      const auto swapped = b.empty() ? r : per(b, a);
      if (!b.empty()) {
        CHECK(swapped.errors() == r.errors());
        CHECK(r.insertions - r.deletions ==
              static_cast<std::int64_t>(b.size()) - static_cast<std::int64_t>(a.size()));
      }
    }
    const auto c = random_seq(rng, 8);
    CHECK(edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c));
  }
}

TEST_CASE("corpus aggregation") {
  const std::vector<SequencePair> one{{seq({"a", "b"}), seq({"a"})}};
  CHECK(corpus_per(one).per_percent == per(one[0].first, one[0].second).per_percent);

  const std::vector<SequencePair> two{{seq({"a", "b", "c", "d"}), seq({"a", "x", "c", "d"})},
                                      {seq({"a", "b", "c", "d"}), seq({"a", "b", "c", "d"})}};
  CHECK(corpus_per(two).per_percent == 12.5);

  const std::vector<SequencePair> uneven{{seq({"a", "b"}), seq({"x", "b"})},
                                         {seq({"a", "b", "c", "d", "e", "f", "g", "h"}), seq({"a", "b", "c", "d", "e", "f", "g", "h"})}};
  CHECK(corpus_per(uneven, Averaging::micro).per_percent == 10.0);
  CHECK(corpus_per(uneven, Averaging::macro).per_percent == 25.0);
  CHECK_THROWS_AS(corpus_per({}), Error);

  oracle::Rng rng(66);
  std::vector<SequencePair> random;
  std::int64_t errors = 0, length = 0;
  for (int i = 0; i < 50; ++i) {
    auto ref = random_seq(rng, 8);
    if (ref.empty()) ref.emplace_back("a");
    auto hyp = random_seq(rng, 8);
    errors += static_cast<std::int64_t>(oracle::edit_distance(ref, hyp));
    length += static_cast<std::int64_t>(ref.size());
    random.emplace_back(ref, hyp);
  }
  CHECK(corpus_per(random).per_percent == doctest::Approx(100.0 * errors / length).epsilon(1e-14));
}
