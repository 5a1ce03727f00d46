#include "ariadapt/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ariadapt/error.hpp"

namespace ariadapt {

namespace {

const std::vector<std::vector<std::string>>& iliTriples() {
  static const std::vector<std::vector<std::string>> triples = {
      {"cough", "fever", "sorethroat"},
      {"cough", "fever", "muscle"},
  };
  return triples;
}

void checkId(std::string_view id) {
  if (id.empty()) throw Error("empty feature identifier");
  if (id.find('&') != std::string_view::npos || id.find(',') != std::string_view::npos)
    throw Error("feature identifier '" + std::string(id) + "' contains '&' or ','");
}

}  // namespace

std::string_view toString(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::demographic: return "demographic";
    case FeatureKind::symptom: return "symptom";
    case FeatureKind::combination: return "combination";
  }
  return "?";
}

bool isDemographicId(std::string_view id) {
  return id == "male" || id.starts_with("age_");
}

FeatureName FeatureName::demographic(std::string id) {
  checkId(id);
  return FeatureName(FeatureKind::demographic, {std::move(id)});
}

FeatureName FeatureName::symptom(std::string id) {
  checkId(id);
  return FeatureName(FeatureKind::symptom, {std::move(id)});
}

FeatureName FeatureName::combination(std::vector<std::string> parts) {
  for (const auto& p : parts) checkId(p);
  std::sort(parts.begin(), parts.end());
  if (std::adjacent_find(parts.begin(), parts.end()) != parts.end())
    throw Error("combination repeats a part");
  if (parts.size() == 3) {
    bool ili = false;
    for (auto triple : iliTriples()) {
      std::sort(triple.begin(), triple.end());
      ili = ili || triple == parts;
    }
    if (!ili) throw Error("three-part combinations are limited to the ILI triples");
  } else if (parts.size() != 2) {
    throw Error("combination needs 2 or 3 parts, got " + std::to_string(parts.size()));
  }
  return FeatureName(FeatureKind::combination, std::move(parts));
}

FeatureName FeatureName::parse(std::string_view label) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto amp = label.find('&', start);
    parts.emplace_back(label.substr(start, amp - start));
    if (amp == std::string_view::npos) break;
    start = amp + 1;
  }
  if (parts.size() == 1)
    return isDemographicId(parts[0]) ? demographic(std::move(parts[0])) : symptom(std::move(parts[0]));
  return combination(std::move(parts));
}

std::string FeatureName::str() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += '&';
    out += parts_[i];
  }
  return out;
}

FeatureSpace::FeatureSpace(std::vector<FeatureName> features) : features_(std::move(features)) {
  index_.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    // str() is injective because kind is recoverable from the parts.
    if (!index_.emplace(features_[i].str(), i).second)
      throw Error("duplicate feature '" + features_[i].str() + "'");
  }
}

FeatureSpace FeatureSpace::canonical(std::vector<FeatureName> features) {
  std::sort(features.begin(), features.end());
  return FeatureSpace(std::move(features));
}

std::optional<std::size_t> FeatureSpace::indexOf(const FeatureName& f) const {
  auto it = index_.find(f.str());
  if (it == index_.end() || !(features_[it->second] == f)) return std::nullopt;
  return it->second;
}

Dataset::Dataset(FeatureSpace space, std::vector<std::uint8_t> x, std::vector<std::uint8_t> y,
                 std::vector<double> w, std::string provenance)
    : space_(std::move(space)),
      x_(std::move(x)),
      y_(std::move(y)),
      w_(std::move(w)),
      provenance_(std::move(provenance)) {
  if (x_.size() != y_.size() * space_.size())
    throw Error("dataset matrix has " + std::to_string(x_.size()) + " cells, expected " +
                std::to_string(y_.size()) + " x " + std::to_string(space_.size()));
  if (w_.size() != y_.size()) throw Error("weight vector length differs from row count");
  for (auto v : x_)
    if (v > 1) throw Error("feature values must be 0 or 1");
  for (auto v : y_)
    if (v > 1) throw Error("labels must be 0 or 1");
  for (double v : w_)
    if (!std::isfinite(v) || v < 0.0) throw Error("weights must be finite and non-negative");
}

Dataset::Dataset(FeatureSpace space, std::vector<std::uint8_t> x, std::vector<std::uint8_t> y,
                 std::string provenance)
    : Dataset(std::move(space), std::move(x), y, std::vector<double>(y.size(), 1.0),
              std::move(provenance)) {}

std::size_t Dataset::countLabel(std::uint8_t label) const {
  return static_cast<std::size_t>(std::count(y_.begin(), y_.end(), label));
}

Dataset Dataset::withLabels(std::vector<std::uint8_t> y) const {
  return Dataset(space_, x_, std::move(y), w_, provenance_);
}

Dataset Dataset::withWeights(std::vector<double> w) const {
  return Dataset(space_, x_, y_, std::move(w), provenance_);
}

Dataset Dataset::withProvenance(std::string provenance) const {
  Dataset out = *this;
  out.provenance_ = std::move(provenance);
  return out;
}

Dataset Dataset::selectRows(std::span<const std::size_t> indices, bool resetWeights) const {
  const std::size_t f = cols();
  std::vector<std::uint8_t> x(indices.size() * f);
  std::vector<std::uint8_t> y(indices.size());
  std::vector<double> w(indices.size(), 1.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    if (i >= rows()) throw Error("row index out of range");
    std::copy_n(x_.begin() + static_cast<std::ptrdiff_t>(i * f), f,
                x.begin() + static_cast<std::ptrdiff_t>(k * f));
    y[k] = y_[i];
    if (!resetWeights) w[k] = w_[i];
  }
  return Dataset(space_, std::move(x), std::move(y), std::move(w), provenance_);
}

Dataset Dataset::concat(const Dataset& a, const Dataset& b, std::string provenance) {
  if (!(a.space_ == b.space_)) throw Error("cannot concatenate datasets over different spaces");
  auto x = a.x_;
  x.insert(x.end(), b.x_.begin(), b.x_.end());
  auto y = a.y_;
  y.insert(y.end(), b.y_.begin(), b.y_.end());
  auto w = a.w_;
  w.insert(w.end(), b.w_.begin(), b.w_.end());
  return Dataset(a.space_, std::move(x), std::move(y), std::move(w), std::move(provenance));
}

FeatureAlignment alignSpaces(const FeatureSpace& source, const FeatureSpace& target) {
  FeatureAlignment out;
  for (const auto& f : source) {
    if (target.contains(f))
      out.shared.push_back(f);
    else
      out.sourceOnly.push_back(f);
  }
  for (const auto& f : target)
    if (!source.contains(f)) out.targetOnly.push_back(f);
  std::sort(out.shared.begin(), out.shared.end());
  std::sort(out.sourceOnly.begin(), out.sourceOnly.end());
  std::sort(out.targetOnly.begin(), out.targetOnly.end());
  return out;
}

Dataset projectDataset(const Dataset& d, std::span<const FeatureName> keep) {
  std::vector<std::size_t> cols;
  cols.reserve(keep.size());
  for (const auto& f : keep) {
    auto idx = d.space().indexOf(f);
    if (!idx) throw Error("unknown feature '" + f.str() + "'");
    cols.push_back(*idx);
  }
  const std::size_t n = d.rows();
  std::vector<std::uint8_t> x(n * cols.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto row = d.row(i);
    for (std::size_t j = 0; j < cols.size(); ++j) x[i * cols.size() + j] = row[cols[j]];
  }
  return Dataset(FeatureSpace({keep.begin(), keep.end()}), std::move(x), d.labels(), d.weights(),
                 d.provenance());
}

std::vector<FeatureName> intersectInOrder(const FeatureSpace& space,
                                          std::span<const FeatureName> allowed) {
  const std::set<FeatureName> allow(allowed.begin(), allowed.end());
  std::vector<FeatureName> out;
  for (const auto& f : space)
    if (allow.count(f)) out.push_back(f);
  return out;
}

}  // namespace ariadapt
