#include "ariadapt/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "ariadapt/error.hpp"

namespace ariadapt {

namespace {

std::string formatReal(double v, const char* format) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::ofstream openOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string csvField(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string formatAuc(const std::optional<double>& auc) {
  return auc ? formatReal(*auc, "%.6f") : std::string("NA");
}

void writeResultsCsv(std::ostream& out, const std::vector<TransferResult>& results) {
  out << "source,target,method,seed,auc,na_reason,n_source_train,n_target_train,n_shared_features\n";
  for (const auto& r : results) {
    out << csvField(r.source) << ',' << csvField(r.target) << ',' << methodName(r.method) << ','
        << r.seed << ',' << (r.auc ? formatReal(*r.auc, "%.10f") : std::string("NA")) << ','
        << csvField(r.naReason.value_or("")) << ',' << r.nSourceTrain << ',' << r.nTargetTrain
        << ',' << r.nSharedFeatures << '\n';
  }
}

void writeBaselineCsv(std::ostream& out, const MatrixReport& report) {
  out << "target,auc\n";
  for (std::size_t t = 0; t < report.names.size(); ++t)
    out << csvField(report.names[t]) << ',' << formatAuc(report.baseline[t]) << '\n';
}

void writeMatrixCsv(std::ostream& out, const MatrixReport& report, const MethodMatrix& m) {
  out << "source";
  for (const auto& n : report.names) out << ',' << csvField(n);
  out << '\n';
  for (std::size_t s = 0; s < report.names.size(); ++s) {
    out << csvField(report.names[s]);
    for (std::size_t t = 0; t < report.names.size(); ++t) out << ',' << formatAuc(m.cells[s][t]);
    out << '\n';
  }
}

void writeMatrixTable(std::ostream& out, const MatrixReport& report, const MethodMatrix& m) {
  const std::string corner = "source \\ target";
  std::size_t first = corner.size();
  std::size_t width = 8;
  for (const auto& n : report.names) {
    first = std::max(first, n.size());
    width = std::max(width, n.size());
  }
  auto pad = [&](const std::string& s, std::size_t w, bool right) {
    const std::string fill(w > s.size() ? w - s.size() : 0, ' ');
    return right ? fill + s : s + fill;
  };
  out << "AUC, " << methodName(m.method) << '\n';
  out << pad(corner, first, false);
  for (const auto& n : report.names) out << "  " << pad(n, width, true);
  out << '\n';
  for (std::size_t s = 0; s < report.names.size(); ++s) {
    out << pad(report.names[s], first, false);
    for (std::size_t t = 0; t < report.names.size(); ++t)
      out << "  " << pad(formatAuc(m.cells[s][t]), width, true);
    out << '\n';
  }
}

void writeBarsCsv(std::ostream& out, const MatrixReport& report) {
  out << "method,source,target,auc,bar\n";
  for (const auto& m : report.matrices)
    for (std::size_t s = 0; s < report.names.size(); ++s)
      for (std::size_t t = 0; t < report.names.size(); ++t) {
        const auto& cell = m.cells[s][t];
        const bool shown = cell && *cell >= 0.5;
        out << methodName(m.method) << ',' << csvField(report.names[s]) << ','
            << csvField(report.names[t]) << ',' << formatAuc(cell) << ','
            << (shown ? formatAuc(cell) : std::string()) << '\n';
      }
}

void writeSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "mix,auc,numeric_runs\n";
  for (const auto& p : points)
    out << formatReal(p.mix, "%g") << ',' << formatAuc(p.auc) << ',' << p.numericRuns << '\n';
}

void writeFeaturesCsv(std::ostream& out, const FeatureSelection& selection) {
  out << "feature,coefficient,p\n";
  for (const auto& f : selection.features)
    out << csvField(f.name.str()) << ',' << formatReal(f.coefficient, "%.6f") << ','
        << formatReal(f.p, "%.6g") << '\n';
}

void writeTrace(std::ostream& out, const Trace& trace) {
  for (const auto& line : trace) out << line << '\n';
}

void writeMatrixOutputs(const std::filesystem::path& dir, const MatrixReport& report) {
  std::filesystem::create_directories(dir);
  {
    auto out = openOutput(dir / "results.csv");
    writeResultsCsv(out, report.results);
  }
  {
    auto out = openOutput(dir / "baseline.csv");
    writeBaselineCsv(out, report);
  }
  {
    auto out = openOutput(dir / "bars.csv");
    writeBarsCsv(out, report);
  }
  for (const auto& m : report.matrices) {
    const std::string stem = "matrix_" + std::string(methodName(m.method));
    auto csv = openOutput(dir / (stem + ".csv"));
    writeMatrixCsv(csv, report, m);
    auto txt = openOutput(dir / (stem + ".txt"));
    writeMatrixTable(txt, report, m);
  }
}

}  // namespace ariadapt
