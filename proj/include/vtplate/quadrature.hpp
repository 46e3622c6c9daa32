#pragma once

#include <vector>

namespace vtplate {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Rules with 1 to 6 points.
GaussRule gauss_legendre(int n);

}  // namespace vtplate
