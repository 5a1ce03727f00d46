#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "ariadapt/core.hpp"
#include "ariadapt/dataset_csv.hpp"
#include "ariadapt/error.hpp"
#include "support.hpp"

using namespace ariadapt;
using namespace testsupport;

namespace {

std::vector<std::string> strs(const std::vector<FeatureName>& v) {
  std::vector<std::string> out;
  for (const auto& f : v) out.push_back(f.str());
  return out;
}

FeatureSpace randomSpace(Rng& rng, const std::vector<std::string>& pool) {
  std::vector<FeatureName> names;
  for (const auto& id : pool)
    if (rng.bernoulli(0.5)) names.push_back(feature(id));
  if (names.empty()) names.push_back(feature(pool[rng.below(pool.size())]));
  rng.shuffle(names);
  return FeatureSpace(names);
}

const std::vector<std::string> kPool = {"male",         "age_0-4",     "age_65+",     "cough",
                                        "fever",        "sorethroat",  "muscle",      "runnynose",
                                        "cough&fever",  "fever&male",  "age_0-4&male", "chills",
                                        "cough&fever&sorethroat"};

}  // namespace

TEST_SUITE("core") {

TEST_CASE("feature names are order-insensitive and typed") {
  CHECK(feature("cough&fever") == feature("fever&cough"));
  CHECK(feature("fever&cough").str() == "cough&fever");
  CHECK((feature("male").kind() == FeatureKind::demographic));
  CHECK((feature("age_16-44").kind() == FeatureKind::demographic));
  CHECK((feature("cough").kind() == FeatureKind::symptom));
  CHECK((feature("sorethroat&cough&fever").kind() == FeatureKind::combination));
  CHECK_THROWS_AS(feature("cough&fever&runnynose"), Error);
  CHECK_THROWS_AS(feature("cough&cough"), Error);
  CHECK_THROWS_AS(feature(""), Error);
}

TEST_CASE("feature space rejects duplicates and sorts canonically") {
  CHECK_THROWS_AS(space({"cough", "fever", "cough"}), Error);
  CHECK_THROWS_AS(space({"cough&fever", "fever&cough"}), Error);
  const auto c = FeatureSpace::canonical({feature("fever&cough"), feature("cough"), feature("male")});
  CHECK(strs(c.features()) == std::vector<std::string>{"male", "cough", "cough&fever"});
  CHECK(c.indexOf(feature("cough")) == std::optional<std::size_t>(1));
  CHECK_FALSE(c.contains(feature("fever")));
}

TEST_CASE("dataset constructor validates shape, values and weights") {
  const auto s = space({"cough", "fever"});
  CHECK_THROWS_AS(Dataset(s, {1, 0, 1}, {1, 0}), Error);
  CHECK_THROWS_AS(Dataset(s, {1, 0, 2, 0}, {1, 0}), Error);
  CHECK_THROWS_AS(Dataset(s, {1, 0, 1, 0}, {1, 2}), Error);
  CHECK_THROWS_AS(Dataset(s, {1, 0, 1, 0}, {1, 0}, std::vector<double>{1.0, -1.0}), Error);
  CHECK_THROWS_AS(Dataset(s, {1, 0, 1, 0}, {1, 0}, std::vector<double>{1.0, std::nan("")}), Error);
  const Dataset d(s, {1, 0, 1, 1}, {1, 0});
  CHECK(d.rows() == 2);
  CHECK(d.weight(1) == 1.0);
  CHECK(d.at(1, 1) == 1);
}

TEST_CASE("alignSpaces examples") {
  SUBCASE("partial overlap") {
    const auto a = alignSpaces(space({"cough", "fever", "male"}), space({"fever", "runnynose", "male"}));
    CHECK(strs(a.shared) == std::vector<std::string>{"male", "fever"});
    CHECK(strs(a.sourceOnly) == std::vector<std::string>{"cough"});
    CHECK(strs(a.targetOnly) == std::vector<std::string>{"runnynose"});
  }
  SUBCASE("identical spaces") {
    const auto s = space({"cough", "fever", "male"});
    const auto a = alignSpaces(s, s);
    CHECK(a.shared.size() == 3);
    CHECK(a.sourceOnly.empty());
    CHECK(a.targetOnly.empty());
  }
  SUBCASE("disjoint spaces") {
    const auto a = alignSpaces(space({"cough"}), space({"fever"}));
    CHECK(a.shared.empty());
    CHECK(a.sourceOnly.size() == 1);
    CHECK(a.targetOnly.size() == 1);
  }
}

TEST_CASE("alignSpaces properties over random space pairs") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = randomSpace(rng, kPool);
    const auto t = randomSpace(rng, kPool);
    const auto ab = alignSpaces(s, t);
    const auto ba = alignSpaces(t, s);
    CHECK(ab.shared == ba.shared);
    CHECK(ab.sourceOnly == ba.targetOnly);
    CHECK(ab.shared.size() + ab.sourceOnly.size() == s.size());
    CHECK(ab.shared.size() + ab.targetOnly.size() == t.size());
    std::set<std::string> su, tu;
    for (const auto& f : ab.shared) su.insert(f.str()), tu.insert(f.str());
    for (const auto& f : ab.sourceOnly) su.insert(f.str());
    for (const auto& f : ab.targetOnly) tu.insert(f.str());
    std::set<std::string> sExpect, tExpect;
    for (const auto& f : s) sExpect.insert(f.str());
    for (const auto& f : t) tExpect.insert(f.str());
    CHECK(su == sExpect);
    CHECK(tu == tExpect);
    CHECK(std::is_sorted(ab.shared.begin(), ab.shared.end()));
  }
}

TEST_CASE("projectDataset examples") {
  const auto d = makeDataset({"cough", "fever", "male"}, {{1, 0, 1}, {0, 1, 1}, {1, 1, 0}}, {1, 0, 1},
                             {1.0, 2.0, 3.0});
  SUBCASE("one named column") {
    const auto p = projectDataset(d, std::vector{feature("fever")});
    CHECK(p.rows() == 3);
    CHECK(p.cols() == 1);
    CHECK(p.values() == std::vector<std::uint8_t>{0, 1, 1});
    CHECK(p.labels() == d.labels());
    CHECK(p.weights() == d.weights());
  }
  SUBCASE("full space in order is the identity") {
    CHECK(projectDataset(d, d.space().features()) == d);
  }
  SUBCASE("unknown feature") {
    try {
      projectDataset(d, std::vector{feature("sneeze")});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("unknown feature 'sneeze'") != std::string::npos);
    }
  }
  SUBCASE("keeps the requested order") {
    const auto p = projectDataset(d, std::vector{feature("male"), feature("cough")});
    CHECK(strs(p.space().features()) == std::vector<std::string>{"male", "cough"});
    CHECK(p.values() == std::vector<std::uint8_t>{1, 1, 1, 0, 0, 1});
  }
}

TEST_CASE("projectDataset is idempotent") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = randomLogisticDataset(rng, 20, 6);
    std::vector<FeatureName> keep;
    for (const auto& f : d.space())
      if (rng.bernoulli(0.5)) keep.push_back(f);
    rng.shuffle(keep);
    const auto once = projectDataset(d, keep);
    CHECK(projectDataset(once, keep) == once);
  }
}

TEST_CASE("selectRows, concat and class counts") {
  const auto d = makeDataset({"cough"}, {{1}, {0}, {1}}, {1, 0, 0}, {2.0, 1.0, 0.5});
  const std::vector<std::size_t> idx{2, 2, 0};
  const auto r = d.selectRows(idx);
  CHECK(r.values() == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(r.weights() == std::vector<double>{0.5, 0.5, 2.0});
  CHECK(d.selectRows(idx, true).weights() == std::vector<double>{1.0, 1.0, 1.0});
  const auto c = Dataset::concat(d, r);
  CHECK(c.rows() == 6);
  CHECK(c.countLabel(1) == 2);
  CHECK_THROWS_AS(Dataset::concat(d, projectDataset(makeDataset({"fever"}, {{1}}, {1}), std::vector{feature("fever")})),
                  Error);
}

TEST_CASE("dataset CSV format") {
  const auto d = makeDataset({"male", "cough", "cough&fever", "fever"}, {{1, 0, 0, 1}, {0, 1, 1, 1}}, {0, 1});
  std::ostringstream out;
  writeDatasetCsv(out, d);
  CHECK(out.str() == "id,male,cough,cough&fever,fever,label\n1,1,0,0,1,0\n2,0,1,1,1,1\n");

  SUBCASE("round trip, columns canonicalized") {
    std::istringstream in(out.str());
    const auto back = parseDatasetCsv(in, "mem.csv");
    CHECK(strs(back.space().features()) ==
          std::vector<std::string>{"male", "cough", "fever", "cough&fever"});
    CHECK(back.rows() == 2);
    CHECK(back.labels() == d.labels());
    CHECK(projectDataset(back, d.space().features()).values() == d.values());
  }
  SUBCASE("malformed cell names file, line and field") {
    std::istringstream in("id,cough,fever,label\n1,0,1,1\n2,1,x,0\n");
    try {
      parseDatasetCsv(in, "bad.csv");
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(e.file() == "bad.csv");
      CHECK(e.line() == 3);
      CHECK(e.field() == "fever");
    }
  }
  SUBCASE("bad label and short row") {
    std::istringstream a("id,cough,label\n1,0,3\n");
    CHECK_THROWS_AS(parseDatasetCsv(a, "a.csv"), InputError);
    std::istringstream b("id,cough,fever,label\n1,0,1\n");
    CHECK_THROWS_AS(parseDatasetCsv(b, "b.csv"), InputError);
    std::istringstream c("cough,label\n0,1\n");
    CHECK_THROWS_AS(parseDatasetCsv(c, "c.csv"), InputError);
  }
}

}  // TEST_SUITE
