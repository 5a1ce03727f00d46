#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ariadapt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input (CSV or config). Carries the location so the CLI
/// can point at the offending file, line and field.
class InputError : public Error {
 public:
  InputError(std::string file, std::size_t line, std::string field, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": field '" + field + "': " + what),
        file_(std::move(file)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

}  // namespace ariadapt

namespace ariadapt {

/// The learner could not reach its gradient tolerance, even with the ridge fallback.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double gradientNorm)
      : Error(what + " (iterations " + std::to_string(iterations) + ", gradient norm " +
              std::to_string(gradientNorm) + ")"),
        iterations_(iterations),
        gradientNorm_(gradientNorm) {}

  int iterations() const noexcept { return iterations_; }
  double gradientNorm() const noexcept { return gradientNorm_; }

 private:
  int iterations_;
  double gradientNorm_;
};

}  // namespace ariadapt
