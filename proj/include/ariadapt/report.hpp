#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ariadapt/harness.hpp"
#include "ariadapt/preprocess.hpp"

namespace ariadapt {

/// Quoted only when the text holds a comma, quote or line break.
std::string csvField(std::string_view text);

/// Fixed six decimals, or "NA".
std::string formatAuc(const std::optional<double>& auc);

void writeResultsCsv(std::ostream& out, const std::vector<TransferResult>& results);
void writeBaselineCsv(std::ostream& out, const MatrixReport& report);
/// Rows are sources, columns are targets.
void writeMatrixCsv(std::ostream& out, const MatrixReport& report, const MethodMatrix& m);
/// Same cells as writeMatrixCsv, padded into columns for reading.
void writeMatrixTable(std::ostream& out, const MatrixReport& report, const MethodMatrix& m);
/// One row per cell of every method; `bar` is empty where the AUC is below 0.5 or NA.
void writeBarsCsv(std::ostream& out, const MatrixReport& report);
void writeSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points);
void writeFeaturesCsv(std::ostream& out, const FeatureSelection& selection);
void writeTrace(std::ostream& out, const Trace& trace);

/// results.csv, baseline.csv, bars.csv and matrix_<method>.{csv,txt} under dir.
void writeMatrixOutputs(const std::filesystem::path& dir, const MatrixReport& report);

}  // namespace ariadapt
