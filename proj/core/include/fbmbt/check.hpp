#pragma once

#include <string>

namespace fbmbt {

/// One named acceptance statistic in a report.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool required = true;
};

}  // namespace fbmbt
