#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ariadapt/synth.hpp"

namespace ariadapt {

// Plain-text configuration: `[kind name]` section headers followed by
// `key = value` lines. `#` starts a comment.

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct ConfigSection {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(std::string_view key) const;
};

struct ConfigDocument {
  std::string origin;
  std::filesystem::path baseDir;
  std::vector<ConfigSection> sections;
};

ConfigDocument parseConfig(std::istream& in, const std::string& origin,
                           std::filesystem::path baseDir = {});
ConfigDocument readConfig(const std::filesystem::path& path);

/// Comma-separated list with surrounding blanks trimmed.
std::vector<std::string> splitList(std::string_view text);

double parseReal(const ConfigEntry& e, const std::string& origin);
long long parseInteger(const ConfigEntry& e, const std::string& origin);
std::vector<double> parseRealList(const ConfigEntry& e, const std::string& origin);

/// A study referenced by a `[dataset <name>]` section: a CSV file or a
/// generative profile (a preset, a full profile, or a shifted copy of an
/// earlier profile).
struct DatasetSource {
  std::string name;
  std::optional<std::filesystem::path> file;
  std::optional<StudyProfile> profile;
};

/// `earlier` holds the profiles of sections already read, for `shift_of`.
DatasetSource parseDatasetSection(const ConfigSection& s, const ConfigDocument& doc,
                                  const std::map<std::string, StudyProfile>& earlier);

std::vector<DatasetSource> parseDatasetSections(const ConfigDocument& doc);

}  // namespace ariadapt
