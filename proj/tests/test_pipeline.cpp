#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "phonosim/pipeline.hpp"

using namespace phonosim;
namespace fs = std::filesystem;

namespace {

const fs::path kToy = PHONOSIM_DATA_DIR "/toy";
const fs::path kGolden = PHONOSIM_GOLDEN_DIR;

const std::vector<std::string> kArtifacts{"distributions.csv", "similarity.csv", "coords.csv",
                                          "contours.json",     "contours.svg",   "selection.json",
                                          "manifest.tsv",      "report.json"};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("phonosim_test_" + name);
  fs::remove_all(dir);
  return dir;
}

PipelineConfig toy_config(const fs::path& out) {
  PipelineConfig c;
  c.corpus_dir = kToy / "corpus";
  c.rules_dir = kToy / "rules";
  c.registry_path = kToy / "registry.csv";
  c.policy_path = kToy / "policy.txt";
  c.target = "bez";  // lowest-resource toy language
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("toy pipeline matches the golden artifacts") {
  const auto out = scratch("golden");
  const auto summary = run_pipeline(toy_config(out));
  CHECK(summary.artifacts.size() == kArtifacts.size());
  for (const auto& name : kArtifacts) {
    CAPTURE(name);
    REQUIRE(fs::exists(out / name));
    CHECK(slurp(out / name) == slurp(kGolden / name));
  }
  CHECK_FALSE(fs::exists(out.string() + ".partial"));
  const auto manifest = slurp(out / "manifest.tsv");
  CHECK(manifest.find("# languages: bez ") != std::string::npos);
}

TEST_CASE("two runs are byte identical") {
  const auto a = scratch("run_a");
  const auto b = scratch("run_b");
  run_pipeline(toy_config(a));
  run_pipeline(toy_config(b));
  for (const auto& name : kArtifacts) CHECK(slurp(a / name) == slurp(b / name));
  run_pipeline(toy_config(a));  // rerun into an existing directory
  for (const auto& name : kArtifacts) CHECK(slurp(a / name) == slurp(b / name));
}

TEST_CASE("a missing rule file aborts at the G2P stage") {
  const auto work = scratch("missing_rules");
  fs::create_directories(work / "rules");
  for (const auto& entry : fs::directory_iterator(kToy / "rules")) {
    if (entry.path().stem() != "alq") fs::copy(entry.path(), work / "rules" / entry.path().filename());
  }
  auto config = toy_config(work / "out");
  config.rules_dir = work / "rules";
  try {
    run_pipeline(config);
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "g2p");
    CHECK(e.language() == "alq");
  }
  CHECK_FALSE(fs::exists(work / "out"));
  CHECK_FALSE(fs::exists(work / "out.partial"));
}

TEST_CASE("configuration and data errors name their stage") {
  auto config = toy_config(scratch("bad"));
  config.k = 0;
  CHECK_THROWS_AS(run_pipeline(config), PipelineError);

  config = toy_config(scratch("bad_target"));
  config.target = "zz";
  try {
    run_pipeline(config);
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "registry");
  }

  const auto work = scratch("bad_corpus");
  fs::create_directories(work / "corpus");
  for (const auto& entry : fs::directory_iterator(kToy / "corpus")) fs::copy(entry.path(), work / "corpus" / entry.path().filename());
  {
    std::ofstream extra(work / "corpus" / "alp.tsv", std::ios::app);
    extra << "c9\tx.mp3\tQuux\n";
  }
  config = toy_config(work / "out");
  config.corpus_dir = work / "corpus";
  try {
    run_pipeline(config);
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "g2p");
    CHECK(e.language() == "alp");
    CHECK(std::string(e.what()).find(":10:") != std::string::npos);
  }
}
