#include "ariadapt/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>

#include "ariadapt/error.hpp"
#include "ariadapt/featurize.hpp"

namespace ariadapt {

namespace {

constexpr std::size_t kAgeBuckets = 5;

double observedRate(double rate, double noise) { return rate * (1.0 - noise) + (1.0 - rate) * noise; }

// Master conditional table; every preset starts from these rates.
const std::vector<std::pair<std::string, SymptomRates>>& masterRates() {
  static const std::vector<std::pair<std::string, SymptomRates>> table = {
      {"blockednose", {0.55, 0.40}},
      {"body aches", {0.60, 0.25}},
      {"chills", {0.55, 0.20}},
      {"cough", {0.85, 0.40}},
      {"diarrhea", {0.08, 0.07}},
      {"earache", {0.15, 0.10}},
      {"fatigue", {0.65, 0.35}},
      {"fever", {0.80, 0.20}},
      {"headache", {0.60, 0.35}},
      {"joint aches", {0.35, 0.15}},
      {"leg pain", {0.20, 0.12}},
      {"loss of appetite", {0.40, 0.20}},
      {"muscle", {0.60, 0.20}},
      {"nausea", {0.15, 0.10}},
      {"phlegm", {0.45, 0.30}},
      {"rash", {0.03, 0.03}},
      {"runnynose", {0.70, 0.40}},
      {"shortness of breath", {0.20, 0.15}},
      {"sinus", {0.35, 0.30}},
      {"sneeze", {0.45, 0.35}},
      {"sorethroat", {0.60, 0.35}},
      {"vomit", {0.10, 0.07}},
      {"wheezy", {0.15, 0.12}},
  };
  return table;
}

SymptomRates masterRate(const std::string& symptom) {
  for (const auto& [name, r] : masterRates())
    if (name == symptom) return r;
  throw Error("symptom '" + symptom + "' is not in the master table");
}

struct PresetSpec {
  const char* name;
  std::size_t n;
  std::size_t positives;
  std::vector<std::string> symptoms;
  double shift;
  double noise;
  int rule;
  std::array<double, kDemographicCells> mix;
  std::uint64_t shiftSeed;
};

StudyProfile buildPreset(const PresetSpec& s) {
  StudyProfile p;
  p.name = s.name;
  p.n = s.n;
  p.symptoms = s.symptoms;
  std::vector<SymptomRates> rates;
  for (const auto& sym : s.symptoms) rates.push_back(masterRate(sym));
  Rng rng(s.shiftSeed);
  p.rates = perturbRates(rates, s.shift, rng);
  p.demographicsMix = s.mix;
  p.reportNoise = s.noise;
  p.inclusionRule = s.rule;
  p.prevalence = prevalenceForRetainedFraction(
      p, static_cast<double>(s.positives) / static_cast<double>(s.n));
  p.validate();
  return p;
}

}  // namespace

void StudyProfile::validate() const {
  if (name.empty()) throw Error("study profile needs a name");
  if (n == 0) throw Error(name + ": n must be positive");
  if (!(prevalence > 0.0 && prevalence < 1.0)) throw Error(name + ": prevalence must lie in (0, 1)");
  if (rates.size() != symptoms.size()) throw Error(name + ": one rate pair per symptom required");
  std::set<std::string> seen;
  for (const auto& s : symptoms) {
    if (isDemographicId(s)) throw Error(name + ": '" + s + "' is a demographic identifier");
    if (!seen.insert(s).second) throw Error(name + ": duplicate symptom '" + s + "'");
  }
  for (const auto& r : rates)
    if (!(r.givenPositive >= 0.0 && r.givenPositive <= 1.0 && r.givenNegative >= 0.0 &&
          r.givenNegative <= 1.0))
      throw Error(name + ": symptom rates must lie in [0, 1]");
  double mass = 0.0;
  for (double m : demographicsMix) {
    if (!(m >= 0.0)) throw Error(name + ": demographic mix entries must be non-negative");
    mass += m;
  }
  if (!(mass > 0.0)) throw Error(name + ": demographic mix is empty");
  if (!(reportNoise >= 0.0 && reportNoise < 0.5)) throw Error(name + ": report noise must lie in [0, 0.5)");
  if (inclusionRule < 0 || inclusionRule > 2) throw Error(name + ": inclusion rule must be 0, 1 or 2");
}

Dataset generate(const StudyProfile& p, Rng& rng) {
  p.validate();
  const auto& ages = ageBucketIds();
  std::vector<FeatureName> names{FeatureName::demographic("male")};
  for (const auto& a : ages) names.push_back(FeatureName::demographic(a));
  for (const auto& s : p.symptoms) names.push_back(FeatureName::symptom(s));
  // Column positions in the generation order, before canonical sorting.
  const FeatureSpace genSpace(names);
  const std::size_t f = genSpace.size();
  const std::size_t firstSymptom = 1 + ages.size();

  const WeightedSampler demo(p.demographicsMix);
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> y;
  x.reserve(p.n * f);
  y.reserve(p.n);
  std::vector<std::uint8_t> row(f);
  const std::size_t budget = p.n * 1000;
  std::size_t attempts = 0;
  while (y.size() < p.n) {
    if (attempts++ >= budget)
      throw Error(p.name + ": inclusion rule retained " + std::to_string(y.size()) + " of " +
                  std::to_string(p.n) + " rows within " + std::to_string(budget) + " draws");
    std::fill(row.begin(), row.end(), 0);
    const std::size_t cell = demo(rng);
    row[0] = cell >= kAgeBuckets ? 1 : 0;
    row[1 + cell % kAgeBuckets] = 1;
    const bool positive = rng.bernoulli(p.prevalence);
    int count = 0;
    for (std::size_t s = 0; s < p.symptoms.size(); ++s) {
      const double r = positive ? p.rates[s].givenPositive : p.rates[s].givenNegative;
      bool present = rng.bernoulli(r);
      if (rng.bernoulli(p.reportNoise)) present = !present;
      row[firstSymptom + s] = present ? 1 : 0;
      count += present ? 1 : 0;
    }
    if (count < p.inclusionRule) continue;
    x.insert(x.end(), row.begin(), row.end());
    y.push_back(positive ? 1 : 0);
  }
  const Dataset raw(genSpace, std::move(x), std::move(y), p.name);
  return projectDataset(raw, FeatureSpace::canonical(names).features());
}

double retentionProbability(const StudyProfile& p, int label) {
  if (p.inclusionRule <= 0) return 1.0;
  // dist[k] = P(k observed symptoms so far), truncated at the rule.
  const auto rule = static_cast<std::size_t>(p.inclusionRule);
  std::vector<double> dist(rule + 1, 0.0);
  dist[0] = 1.0;
  for (const auto& r : p.rates) {
    const double q = observedRate(label ? r.givenPositive : r.givenNegative, p.reportNoise);
    for (std::size_t k = rule; k > 0; --k) {
      const double fromBelow = dist[k - 1] * q;
      dist[k] = (k == rule ? dist[k] : dist[k] * (1.0 - q)) + fromBelow;
    }
    dist[0] *= 1.0 - q;
  }
  return dist[rule];
}

double expectedPositiveFraction(const StudyProfile& p) {
  const double r1 = retentionProbability(p, 1);
  const double r0 = retentionProbability(p, 0);
  const double pos = p.prevalence * r1;
  return pos / (pos + (1.0 - p.prevalence) * r0);
}

double prevalenceForRetainedFraction(const StudyProfile& p, double wantedFraction) {
  if (!(wantedFraction > 0.0 && wantedFraction < 1.0))
    throw Error("retained positive fraction must lie in (0, 1)");
  const double r1 = retentionProbability(p, 1);
  const double r0 = retentionProbability(p, 0);
  if (!(r1 > 0.0 && r0 > 0.0)) throw Error(p.name + ": inclusion rule excludes a class entirely");
  const double odds = wantedFraction / (1.0 - wantedFraction) * r0 / r1;
  return odds / (1.0 + odds);
}

std::vector<StudyProfile> presetProfiles() {
  const std::vector<PresetSpec> specs = {
      {"NYUMC", 21907, 583,
       {"cough", "diarrhea", "fatigue", "fever", "headache", "muscle", "nausea", "sorethroat", "vomit"},
       0.10, 0.005, 1,
       {0.05, 0.06, 0.22, 0.13, 0.09, 0.05, 0.06, 0.17, 0.10, 0.07}, 101},
      {"GoViral", 520, 297,
       {"body aches", "chills", "cough", "diarrhea", "fatigue", "fever", "leg pain", "nausea",
        "runnynose", "shortness of breath", "sorethroat", "vomit"},
       0.05, 0.30, 1,
       {0.01, 0.02, 0.38, 0.12, 0.03, 0.01, 0.02, 0.30, 0.09, 0.02}, 102},
      {"FluWatch", 915, 498,
       {"fever", "cough", "sorethroat", "runnynose", "blockednose", "sneeze", "diarrhea", "muscle",
        "headache", "rash", "earache", "wheezy", "chills", "joint aches", "loss of appetite",
        "fatigue", "vomit", "nausea"},
       0.05, 0.28, 1,
       {0.06, 0.10, 0.17, 0.14, 0.05, 0.06, 0.10, 0.15, 0.12, 0.05}, 103},
      {"HongKong", 4954, 1137,
       {"cough", "fever", "headache", "muscle", "phlegm", "runnynose", "sorethroat"},
       0.05, 0.20, 0,
       {0.04, 0.08, 0.26, 0.12, 0.04, 0.04, 0.08, 0.22, 0.09, 0.03}, 104},
      {"Hutterite1", 1281, 616,
       {"blockednose", "chills", "cough", "earache", "fatigue", "fever", "headache", "muscle",
        "runnynose", "sorethroat"},
       0.05, 0.24, 2,
       {0.10, 0.18, 0.16, 0.05, 0.02, 0.10, 0.17, 0.15, 0.05, 0.02}, 105},
      {"Hutterite2", 1236, 191,
       {"chills", "cough", "fever", "headache", "muscle", "runnynose", "sinus"},
       0.05, 0.05, 0,
       {0.09, 0.17, 0.17, 0.06, 0.02, 0.09, 0.16, 0.16, 0.06, 0.02}, 106},
  };
  std::vector<StudyProfile> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(buildPreset(s));
  return out;
}

std::optional<StudyProfile> findPreset(std::string_view name) {
  for (auto& p : presetProfiles())
    if (p.name == name) return p;
  return std::nullopt;
}

std::vector<SymptomRates> perturbRates(const std::vector<SymptomRates>& rates, double delta,
                                       Rng& rng) {
  if (!(delta >= 0.0)) throw Error("shift magnitude must be non-negative");
  auto out = rates;
  if (delta == 0.0) return out;
  auto move = [&](double v) {
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    return std::clamp(v + sign * delta, 0.01, 0.99);
  };
  for (auto& r : out) {
    r.givenPositive = move(r.givenPositive);
    r.givenNegative = move(r.givenNegative);
  }
  return out;
}

std::pair<StudyProfile, StudyProfile> shiftPair(const StudyProfile& base, double delta, Rng& rng) {
  StudyProfile shifted = base;
  shifted.name = base.name + "_shift";
  shifted.rates = perturbRates(base.rates, delta, rng);
  shifted.validate();
  return {base, shifted};
}

void writeProfile(std::ostream& out, const StudyProfile& p) {
  char buf[64];
  auto num = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  out << "[dataset " << p.name << "]\n";
  out << "n = " << p.n << '\n';
  out << "prevalence = " << num(p.prevalence) << '\n';
  out << "report_noise = " << num(p.reportNoise) << '\n';
  out << "inclusion_rule = " << p.inclusionRule << '\n';
  out << "symptoms = ";
  for (std::size_t i = 0; i < p.symptoms.size(); ++i) out << (i ? ", " : "") << p.symptoms[i];
  out << '\n';
  for (int g = 0; g < 2; ++g) {
    out << (g ? "mix.male = " : "mix.female = ");
    for (std::size_t a = 0; a < kAgeBuckets; ++a)
      out << (a ? ", " : "") << num(p.demographicsMix[g * kAgeBuckets + a]);
    out << '\n';
  }
  for (std::size_t s = 0; s < p.symptoms.size(); ++s)
    out << "rate." << p.symptoms[s] << " = " << num(p.rates[s].givenPositive) << ", "
        << num(p.rates[s].givenNegative) << '\n';
}

}  // namespace ariadapt
