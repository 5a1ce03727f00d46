#include "ariadapt/dataset_csv.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ariadapt/error.hpp"

namespace ariadapt {

namespace {

std::vector<std::string> splitLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::uint8_t parseBit(const std::string& cell, const std::string& origin, std::size_t line,
                      const std::string& field) {
  if (cell == "0") return 0;
  if (cell == "1") return 1;
  throw InputError(origin, line, field, "expected 0 or 1, got '" + cell + "'");
}

}  // namespace

void writeDatasetCsv(std::ostream& out, const Dataset& d) {
  out << "id";
  for (const auto& f : d.space()) out << ',' << f.str();
  out << ",label\n";
  std::string line;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    line = std::to_string(i + 1);
    for (auto v : d.row(i)) {
      line += ',';
      line += static_cast<char>('0' + v);
    }
    line += ',';
    line += static_cast<char>('0' + d.label(i));
    line += '\n';
    out << line;
  }
}

void writeDatasetCsv(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  writeDatasetCsv(out, d);
}

Dataset parseDatasetCsv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(origin, 1, "header", "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = splitLine(line);
  if (header.size() < 2 || header.front() != "id" || header.back() != "label")
    throw InputError(origin, 1, "header", "expected 'id,<features...>,label'");

  std::vector<FeatureName> names;
  for (std::size_t j = 1; j + 1 < header.size(); ++j) {
    try {
      names.push_back(FeatureName::parse(header[j]));
    } catch (const Error& e) {
      throw InputError(origin, 1, header[j], e.what());
    }
  }
  FeatureSpace fileSpace;
  try {
    fileSpace = FeatureSpace(names);
  } catch (const Error& e) {
    throw InputError(origin, 1, "header", e.what());
  }

  const std::size_t f = names.size();
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> y;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = splitLine(line);
    if (cells.size() != header.size())
      throw InputError(origin, lineNo, "row", "expected " + std::to_string(header.size()) +
                                                  " cells, got " + std::to_string(cells.size()));
    for (std::size_t j = 0; j < f; ++j)
      x.push_back(parseBit(cells[j + 1], origin, lineNo, header[j + 1]));
    y.push_back(parseBit(cells.back(), origin, lineNo, "label"));
  }

  Dataset raw(std::move(fileSpace), std::move(x), std::move(y), origin);
  auto canonical = FeatureSpace::canonical(names).features();
  return projectDataset(raw, canonical);
}

Dataset readDatasetCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), 0, "file", "cannot open");
  return parseDatasetCsv(in, path.string());
}

}  // namespace ariadapt
