#include "ariadapt/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "ariadapt/error.hpp"

namespace ariadapt {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const ConfigEntry* ConfigSection::find(std::string_view key) const {
  const ConfigEntry* hit = nullptr;
  for (const auto& e : entries)
    if (e.key == key) hit = &e;
  return hit;
}

ConfigDocument parseConfig(std::istream& in, const std::string& origin,
                           std::filesystem::path baseDir) {
  ConfigDocument doc{origin, std::move(baseDir), {}};
  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(origin, lineNo, "section", "missing ']'");
      const std::string inner = trim(std::string_view(line).substr(1, line.size() - 2));
      const auto space = inner.find_first_of(" \t");
      ConfigSection s;
      s.kind = inner.substr(0, space);
      s.name = space == std::string::npos ? std::string() : trim(std::string_view(inner).substr(space));
      s.line = lineNo;
      if (s.kind != "dataset" && s.kind != "experiment")
        throw InputError(origin, lineNo, "section", "unknown section kind '" + s.kind + "'");
      if (s.kind == "dataset" && s.name.empty())
        throw InputError(origin, lineNo, "section", "dataset section needs a name");
      doc.sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(origin, lineNo, line, "expected 'key = value'");
    if (doc.sections.empty()) throw InputError(origin, lineNo, trim(line.substr(0, eq)), "entry outside any section");
    ConfigEntry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), lineNo};
    if (e.key.empty()) throw InputError(origin, lineNo, "key", "empty key");
    doc.sections.back().entries.push_back(std::move(e));
  }
  return doc;
}

ConfigDocument readConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), 0, "file", "cannot open");
  return parseConfig(in, path.string(), path.parent_path());
}

std::vector<std::string> splitList(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parseReal(const ConfigEntry& e, const std::string& origin) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw InputError(origin, e.line, e.key, "expected a number, got '" + e.value + "'");
  return v;
}

long long parseInteger(const ConfigEntry& e, const std::string& origin) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw InputError(origin, e.line, e.key, "expected an integer, got '" + e.value + "'");
  return v;
}

std::vector<double> parseRealList(const ConfigEntry& e, const std::string& origin) {
  std::vector<double> out;
  for (const auto& item : splitList(e.value)) out.push_back(parseReal({e.key, item, e.line}, origin));
  return out;
}

DatasetSource parseDatasetSection(const ConfigSection& s, const ConfigDocument& doc,
                                  const std::map<std::string, StudyProfile>& earlier) {
  const std::string& origin = doc.origin;
  DatasetSource out;
  out.name = s.name;

  if (const auto* f = s.find("file")) {
    if (s.entries.size() != 1)
      throw InputError(origin, s.line, "file", "a file dataset takes no other keys");
    std::filesystem::path p = f->value;
    if (p.is_relative() && !doc.baseDir.empty()) p = doc.baseDir / p;
    out.file = p;
    return out;
  }

  StudyProfile p;
  bool haveBase = false;
  if (const auto* e = s.find("preset")) {
    auto preset = findPreset(e->value);
    if (!preset) throw InputError(origin, e->line, e->key, "unknown preset '" + e->value + "'");
    p = *preset;
    haveBase = true;
  }
  if (const auto* e = s.find("shift_of")) {
    auto it = earlier.find(e->value);
    if (it == earlier.end())
      throw InputError(origin, e->line, e->key, "no earlier generated dataset '" + e->value + "'");
    if (haveBase) throw InputError(origin, e->line, e->key, "use either preset or shift_of");
    const auto* d = s.find("delta");
    if (!d) throw InputError(origin, s.line, "delta", "shift_of requires delta");
    const double delta = parseReal(*d, origin);
    const auto* sd = s.find("shift_seed");
    Rng rng(sd ? static_cast<std::uint64_t>(parseInteger(*sd, origin)) : 0);
    try {
      p = shiftPair(it->second, delta, rng).second;
    } catch (const Error& err) {
      throw InputError(origin, d->line, d->key, err.what());
    }
    haveBase = true;
  }
  p.name = s.name;

  std::set<std::string> rateKeys;
  for (const auto& e : s.entries) {
    if (e.key == "preset" || e.key == "shift_of" || e.key == "delta" || e.key == "shift_seed") continue;
    if (e.key == "n") {
      const auto v = parseInteger(e, origin);
      if (v <= 0) throw InputError(origin, e.line, e.key, "must be positive");
      p.n = static_cast<std::size_t>(v);
    } else if (e.key == "prevalence") {
      p.prevalence = parseReal(e, origin);
    } else if (e.key == "report_noise") {
      p.reportNoise = parseReal(e, origin);
    } else if (e.key == "inclusion_rule") {
      p.inclusionRule = static_cast<int>(parseInteger(e, origin));
    } else if (e.key == "symptoms") {
      p.symptoms = splitList(e.value);
      p.rates.assign(p.symptoms.size(), SymptomRates{});
    } else if (e.key == "mix.female" || e.key == "mix.male") {
      const auto v = parseRealList(e, origin);
      if (v.size() != 5) throw InputError(origin, e.line, e.key, "expected 5 age-bucket weights");
      const std::size_t off = e.key == "mix.male" ? 5 : 0;
      for (std::size_t a = 0; a < 5; ++a) p.demographicsMix[off + a] = v[a];
    } else if (e.key.starts_with("rate.")) {
      rateKeys.insert(e.key);
    } else {
      throw InputError(origin, e.line, e.key, "unknown dataset key");
    }
  }
  // Rates after symptoms, whatever the line order.
  for (const auto& e : s.entries) {
    if (!e.key.starts_with("rate.")) continue;
    const std::string sym = e.key.substr(5);
    auto it = std::find(p.symptoms.begin(), p.symptoms.end(), sym);
    if (it == p.symptoms.end()) throw InputError(origin, e.line, e.key, "symptom not in 'symptoms'");
    const auto v = parseRealList(e, origin);
    if (v.size() != 2) throw InputError(origin, e.line, e.key, "expected 'P(s|y=1), P(s|y=0)'");
    p.rates[static_cast<std::size_t>(it - p.symptoms.begin())] = {v[0], v[1]};
  }
  if (!haveBase) {
    for (const char* key : {"n", "prevalence", "symptoms"})
      if (!s.find(key)) throw InputError(origin, s.line, key, "missing required key");
  }
  if (!haveBase || s.find("symptoms")) {
    if (rateKeys.size() != p.symptoms.size())
      throw InputError(origin, s.line, "rate", "every symptom needs a 'rate.<symptom>' line");
  }
  try {
    p.validate();
  } catch (const Error& err) {
    throw InputError(origin, s.line, s.name, err.what());
  }
  out.profile = std::move(p);
  return out;
}

std::vector<DatasetSource> parseDatasetSections(const ConfigDocument& doc) {
  std::vector<DatasetSource> out;
  std::map<std::string, StudyProfile> profiles;
  std::set<std::string> names;
  for (const auto& s : doc.sections) {
    if (s.kind != "dataset") continue;
    if (!names.insert(s.name).second)
      throw InputError(doc.origin, s.line, s.name, "duplicate dataset name");
    auto src = parseDatasetSection(s, doc, profiles);
    if (src.profile) profiles.emplace(src.name, *src.profile);
    out.push_back(std::move(src));
  }
  return out;
}

}  // namespace ariadapt
