#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fbmbt {

/// A smooth real function together with its derivatives.
///
/// Built-ins provide derivatives of every order up to kMaxOrder; the
/// variations machinery needs orders 0..13.
class SmoothFunction {
 public:
  /// eval(order, x) returns the order-th derivative at x.
  using Evaluator = std::function<double(int, double)>;

  static constexpr int kMaxOrder = 40;

  SmoothFunction(std::string descriptor, Evaluator eval, int max_order = kMaxOrder);

  double operator()(double x) const { return eval_(0, x); }
  [[nodiscard]] double derivative(int order, double x) const;

  /// The function x -> f^{(order)}(x), itself smooth.
  [[nodiscard]] SmoothFunction derivative_function(int order) const;

  [[nodiscard]] const std::string& descriptor() const noexcept { return descriptor_; }
  [[nodiscard]] int max_order() const noexcept { return max_order_; }

  static SmoothFunction sine();
  static SmoothFunction cosine();
  static SmoothFunction constant(double c = 1.0);
  /// coeffs[k] multiplies x^k.
  static SmoothFunction polynomial(std::vector<double> coeffs);
  /// exp(-x^2/2).
  static SmoothFunction gaussian_bump();

  /// Accepts: sin, cos, one, const:<c>, x, x2, x3, bump, poly:<c0>,<c1>,...
  static SmoothFunction parse(std::string_view text);

 private:
  std::string descriptor_;
  Evaluator eval_;
  int max_order_;
};

}  // namespace fbmbt
