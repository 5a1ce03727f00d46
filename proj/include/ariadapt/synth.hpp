#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ariadapt/core.hpp"
#include "ariadapt/random.hpp"

namespace ariadapt {

struct SymptomRates {
  double givenPositive = 0.5;  // P(s = 1 | y = 1)
  double givenNegative = 0.5;  // P(s = 1 | y = 0)
};

/// Demographic cells: index = gender * 5 + age bucket, gender 0 = female, 1 = male.
inline constexpr std::size_t kDemographicCells = 10;

/// Generative parameters of one synthetic study design. Symptoms are
/// independent given infection status; each recorded cell is flipped with
/// probability reportNoise; rows with fewer than inclusionRule observed
/// symptoms are not retained.
struct StudyProfile {
  std::string name;
  std::size_t n = 0;
  double prevalence = 0.5;
  std::vector<std::string> symptoms;
  std::vector<SymptomRates> rates;  // aligned with symptoms
  std::array<double, kDemographicCells> demographicsMix{};
  double reportNoise = 0.0;
  int inclusionRule = 0;

  void validate() const;
};

/// Base-feature dataset (demographic indicators and symptoms, canonical order).
/// Throws when n rows cannot be retained within n * 1000 draws.
Dataset generate(const StudyProfile& p, Rng& rng);

/// Probability that a drawn row with the given label passes the inclusion rule.
double retentionProbability(const StudyProfile& p, int label);
/// Expected positive fraction among retained rows.
double expectedPositiveFraction(const StudyProfile& p);
/// Prevalence that yields the wanted retained positive fraction under p's inclusion rule.
double prevalenceForRetainedFraction(const StudyProfile& p, double wantedFraction);

/// NYUMC, GoViral, FluWatch, HongKong, Hutterite1, Hutterite2. Sizes and
/// expected positive counts follow the published study table; conditional
/// rates, noise levels and demographic mixes are synthetic.
std::vector<StudyProfile> presetProfiles();
std::optional<StudyProfile> findPreset(std::string_view name);

/// Every rate moved by +delta or -delta (random sign per entry), clamped to [0.01, 0.99].
std::vector<SymptomRates> perturbRates(const std::vector<SymptomRates>& rates, double delta,
                                       Rng& rng);
/// (base, shifted copy of base). delta = 0 returns two identical profiles.
std::pair<StudyProfile, StudyProfile> shiftPair(const StudyProfile& base, double delta, Rng& rng);

/// `[dataset <name>]` section with `key = value` lines; parsed back by the config reader.
void writeProfile(std::ostream& out, const StudyProfile& p);

}  // namespace ariadapt
