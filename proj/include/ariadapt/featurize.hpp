#pragma once

#include <string>
#include <vector>

#include "ariadapt/core.hpp"

namespace ariadapt {

/// Fixed age buckets; each becomes one binary demographic indicator.
const std::vector<std::string>& ageBucketIds();
/// "male" followed by the age bucket ids.
const std::vector<std::string>& standardDemographicIds();

struct BaseVocabulary {
  std::vector<std::string> demographics;
  std::vector<std::string> symptoms;

  std::size_t size() const noexcept { return demographics.size() + symptoms.size(); }
};

/// Singletons, every unordered pair over demographics and symptoms together,
/// and each ILI triple whose three symptoms are all present. Canonical order.
FeatureSpace buildCombinationSpace(const BaseVocabulary& v);

/// Base vocabulary read off the singleton columns of a space.
BaseVocabulary baseVocabularyOf(const FeatureSpace& space);

/// Fills every column of `space` as the AND of its parts' base columns in `base`.
Dataset materializeCombinations(const Dataset& base, const FeatureSpace& space);

/// materializeCombinations over the combination space of base's own singletons.
/// Datasets that already contain combination columns are returned unchanged.
Dataset expandCombinations(const Dataset& base);

/// Rows sharing a feature vector all get label 1 iff that vector has strictly
/// more positive than negative rows; ties go to 0.
Dataset standardizeLabels(const Dataset& d);

}  // namespace ariadapt
