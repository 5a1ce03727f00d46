#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ariadapt/core.hpp"

namespace ariadapt {

/// Header `id,<feature names...>,label`; 0/1 cells; LF line endings.
/// Columns are written in the dataset's space order.
void writeDatasetCsv(std::ostream& out, const Dataset& d);
void writeDatasetCsv(const std::filesystem::path& path, const Dataset& d);

/// Columns are reordered canonically. Weights default to 1. `origin` names the
/// input in InputError diagnostics.
Dataset parseDatasetCsv(std::istream& in, const std::string& origin);
Dataset readDatasetCsv(const std::filesystem::path& path);

}  // namespace ariadapt
