#pragma once

#include <stdexcept>
#include <string>

namespace fbmbt {

/// A grid or path does not reach far enough for the requested evaluation.
class ExtentError : public std::out_of_range {
 public:
  ExtentError(const std::string& what, double required) : std::out_of_range(what), required_(required) {}
  [[nodiscard]] double required() const noexcept { return required_; }

 private:
  double required_;
};

/// A skeleton has fewer walk steps than a statistic needs.
class InsufficientStepsError : public std::runtime_error {
 public:
  InsufficientStepsError(const std::string& what, std::size_t shortfall)
      : std::runtime_error(what), shortfall_(shortfall) {}
  [[nodiscard]] std::size_t shortfall() const noexcept { return shortfall_; }

 private:
  std::size_t shortfall_;
};

/// Circulant embedding produced a spectrum that is negative beyond tolerance
/// and the grid is too large for the exact fallback.
class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fbmbt
