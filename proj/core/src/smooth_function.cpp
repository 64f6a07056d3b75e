#include "fbmbt/smooth_function.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace fbmbt {

SmoothFunction::SmoothFunction(std::string descriptor, Evaluator eval, int max_order)
    : descriptor_(std::move(descriptor)), eval_(std::move(eval)), max_order_(max_order) {
  if (!eval_) throw std::invalid_argument("SmoothFunction: empty evaluator");
}

double SmoothFunction::derivative(int order, double x) const {
  if (order < 0 || order > max_order_) {
    throw std::out_of_range("SmoothFunction '" + descriptor_ + "': derivative order " + std::to_string(order) +
                            " unavailable (max " + std::to_string(max_order_) + ")");
  }
  return eval_(order, x);
}

SmoothFunction SmoothFunction::derivative_function(int order) const {
  if (order == 0) return *this;
  if (order < 0 || order > max_order_) {
    throw std::out_of_range("SmoothFunction '" + descriptor_ + "': derivative order out of range");
  }
  auto base = eval_;
  return SmoothFunction(descriptor_ + "^(" + std::to_string(order) + ")",
                        [base, order](int k, double x) { return base(k + order, x); }, max_order_ - order);
}

SmoothFunction SmoothFunction::sine() {
  return SmoothFunction("sin", [](int k, double x) {
    switch (k % 4) {
      case 0:
        return std::sin(x);
      case 1:
        return std::cos(x);
      case 2:
        return -std::sin(x);
      default:
        return -std::cos(x);
    }
  });
}

SmoothFunction SmoothFunction::cosine() {
  return SmoothFunction("cos", [](int k, double x) {
    switch (k % 4) {
      case 0:
        return std::cos(x);
      case 1:
        return -std::sin(x);
      case 2:
        return -std::cos(x);
      default:
        return std::sin(x);
    }
  });
}

SmoothFunction SmoothFunction::constant(double c) {
  std::ostringstream name;
  if (c == 1.0) {
    name << "one";
  } else {
    name << "const:" << c;
  }
  return SmoothFunction(name.str(), [c](int k, double) { return k == 0 ? c : 0.0; });
}

SmoothFunction SmoothFunction::polynomial(std::vector<double> coeffs) {
  std::ostringstream name;
  name << "poly:";
  for (std::size_t i = 0; i < coeffs.size(); ++i) name << (i ? "," : "") << coeffs[i];
  auto shared = std::make_shared<const std::vector<double>>(std::move(coeffs));
  return SmoothFunction(name.str(), [shared](int k, double x) {
    const auto& c = *shared;
    // Horner on the k-th derivative: sum_{i>=k} c_i i!/(i-k)! x^{i-k}.
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(k);) {
      double falling = 1.0;
      for (int m = 0; m < k; ++m) falling *= static_cast<double>(i - static_cast<std::size_t>(m));
      acc = acc * x + c[i] * falling;
    }
    return acc;
  });
}

SmoothFunction SmoothFunction::gaussian_bump() {
  // d^k/dx^k exp(-x^2/2) = (-1)^k He_k(x) exp(-x^2/2).
  return SmoothFunction("bump", [](int k, double x) {
    double prev = 1.0;
    double cur = x;
    if (k == 0) {
      cur = 1.0;
    } else {
      for (int p = 1; p < k; ++p) {
        const double next = x * cur - p * prev;
        prev = cur;
        cur = next;
      }
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * cur * std::exp(-0.5 * x * x);
  });
}

SmoothFunction SmoothFunction::parse(std::string_view text) {
  const std::string s(text);
  if (s == "sin") return sine();
  if (s == "cos") return cosine();
  if (s == "one") return constant(1.0);
  if (s == "bump") return gaussian_bump();
  if (s == "x") return polynomial({0.0, 1.0});
  if (s == "x2") return polynomial({0.0, 0.0, 1.0});
  if (s == "x3") return polynomial({0.0, 0.0, 0.0, 1.0});
  if (s.rfind("const:", 0) == 0) return constant(std::stod(s.substr(6)));
  if (s.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::stringstream in(s.substr(5));
    std::string item;
    while (std::getline(in, item, ',')) coeffs.push_back(std::stod(item));
    if (coeffs.empty()) throw std::invalid_argument("poly: needs at least one coefficient");
    return polynomial(std::move(coeffs));
  }
  throw std::invalid_argument("unknown function '" + s + "' (expected sin, cos, one, bump, x, x2, x3, const:c, poly:...)");
}

}  // namespace fbmbt
