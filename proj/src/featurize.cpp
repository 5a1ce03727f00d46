#include "ariadapt/featurize.hpp"

#include <algorithm>
#include <set>
#include <string_view>
#include <unordered_map>

#include "ariadapt/error.hpp"

namespace ariadapt {

const std::vector<std::string>& ageBucketIds() {
  static const std::vector<std::string> ids = {"age_0-4", "age_5-15", "age_16-44", "age_45-64",
                                               "age_65+"};
  return ids;
}

const std::vector<std::string>& standardDemographicIds() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out{"male"};
    out.insert(out.end(), ageBucketIds().begin(), ageBucketIds().end());
    return out;
  }();
  return ids;
}

FeatureSpace buildCombinationSpace(const BaseVocabulary& v) {
  if (v.size() == 0) throw Error("empty base vocabulary");
  std::vector<FeatureName> features;
  std::vector<std::string> base;
  std::set<std::string> seen;
  for (const auto& d : v.demographics) {
    if (!isDemographicId(d)) throw Error("'" + d + "' is not a demographic identifier");
    if (!seen.insert(d).second) throw Error("duplicate base feature '" + d + "'");
    features.push_back(FeatureName::demographic(d));
    base.push_back(d);
  }
  for (const auto& s : v.symptoms) {
    if (isDemographicId(s)) throw Error("'" + s + "' is a demographic identifier");
    if (!seen.insert(s).second) throw Error("duplicate base feature '" + s + "'");
    features.push_back(FeatureName::symptom(s));
    base.push_back(s);
  }
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = a + 1; b < base.size(); ++b)
      features.push_back(FeatureName::combination({base[a], base[b]}));

  const std::set<std::string> symptoms(v.symptoms.begin(), v.symptoms.end());
  for (const char* last : {"sorethroat", "muscle"}) {
    if (symptoms.count("cough") && symptoms.count("fever") && symptoms.count(last))
      features.push_back(FeatureName::combination({"cough", "fever", last}));
  }
  return FeatureSpace::canonical(std::move(features));
}

BaseVocabulary baseVocabularyOf(const FeatureSpace& space) {
  BaseVocabulary v;
  for (const auto& f : space) {
    if (f.kind() == FeatureKind::demographic) v.demographics.push_back(f.parts()[0]);
    if (f.kind() == FeatureKind::symptom) v.symptoms.push_back(f.parts()[0]);
  }
  return v;
}

Dataset materializeCombinations(const Dataset& base, const FeatureSpace& space) {
  // Column plan: for each output feature, the base column index of each part.
  std::vector<std::vector<std::size_t>> plan;
  plan.reserve(space.size());
  for (const auto& f : space) {
    std::vector<std::size_t> cols;
    for (const auto& part : f.parts()) {
      auto idx = base.space().indexOf(FeatureName::parse(part));
      if (!idx) throw Error("missing base feature '" + part + "' for '" + f.str() + "'");
      cols.push_back(*idx);
    }
    plan.push_back(std::move(cols));
  }
  const std::size_t n = base.rows();
  const std::size_t f = space.size();
  std::vector<std::uint8_t> x(n * f);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = base.row(i);
    for (std::size_t j = 0; j < f; ++j) {
      std::uint8_t v = 1;
      for (auto c : plan[j]) v &= row[c];
      x[i * f + j] = v;
    }
  }
  return Dataset(space, std::move(x), base.labels(), base.weights(), base.provenance());
}

Dataset expandCombinations(const Dataset& base) {
  const bool hasCombos = std::any_of(base.space().begin(), base.space().end(),
                                     [](const FeatureName& f) { return !f.isBase(); });
  if (hasCombos) return base;
  return materializeCombinations(base, buildCombinationSpace(baseVocabularyOf(base.space())));
}

Dataset standardizeLabels(const Dataset& d) {
  if (d.empty()) throw Error("cannot standardize labels of an empty dataset");
  struct Tally {
    std::size_t pos = 0;
    std::size_t neg = 0;
  };
  const std::size_t f = d.cols();
  const auto* data = reinterpret_cast<const char*>(d.values().data());
  std::unordered_map<std::string_view, Tally> groups;
  groups.reserve(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    auto& t = groups[std::string_view(data + i * f, f)];
    (d.label(i) ? t.pos : t.neg) += 1;
  }
  std::vector<std::uint8_t> y(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const auto& t = groups.at(std::string_view(data + i * f, f));
    y[i] = t.pos > t.neg ? 1 : 0;
  }
  return d.withLabels(std::move(y));
}

}  // namespace ariadapt
