#pragma once

#include <cmath>
#include <random>

#include <Eigen/Core>

#include "vtplate/plate_model.hpp"

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline vtplate::Patch2D square(double a, int elems, int degree = 2) {
  return vtplate::Patch2D::rectangle(-0.5 * a, 0.5 * a, -0.5 * a, 0.5 * a, elems, elems, degree);
}

inline vtplate::PlateModel isotropic_plate(double a, double h, int elems, double e = 3.0e6,
                                           double nu = 0.25, vtplate::PlateOptions opt = {}) {
  vtplate::Patch2D patch = square(a, elems);
  auto field = vtplate::fit_equal_plies(patch, [h](double, double) { return h; }, 1);
  const double angles[] = {0.0};
  return vtplate::PlateModel(patch, field,
                             vtplate::Layup(vtplate::LaminaMaterial::isotropic(e, nu), angles), opt);
}

inline Eigen::VectorXd random_vector(Eigen::Index n, double scale, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace testing
