#pragma once

#include <functional>
#include <vector>

#include "vtplate/nurbs.hpp"

namespace vtplate {

/// Thickness of the whole laminate at a physical point (x, y).
using ThicknessFunction = std::function<double(double x, double y)>;
/// Thickness of lamina k at (x, y).
using LaminaThicknessFunction = std::function<double(double x, double y, int k)>;

/// Per-lamina thickness interpolated with the patch basis from one control
/// parameter per control point and lamina. The midplane is flat; laminae are
/// stacked bottom-up and centred on it.
class ThicknessField {
 public:
  /// grids[k] holds one value per control point of `patch` (patch ordering).
  ThicknessField(Patch2D patch, std::vector<std::vector<double>> grids);

  int lamina_count() const { return static_cast<int>(grids_.size()); }
  const Patch2D& patch() const { return patch_; }
  const std::vector<double>& control(int k) const;

  double lamina_thickness(ParamPoint pt, int k) const;
  double lamina_thickness(const RationalBasis& rb, int k) const;
  double total(ParamPoint pt) const;
  double total(const RationalBasis& rb) const;
  /// Parametric gradient (d/dxi, d/deta) of the total thickness.
  Eigen::Vector2d total_gradient(ParamPoint pt) const;

  /// Interface coordinates z_1 = -h/2 < ... < z_{n+1} = h/2.
  std::vector<double> interfaces(ParamPoint pt) const;
  std::vector<double> interfaces(const RationalBasis& rb) const;

  /// Integral of the total thickness over the patch.
  double volume() const;

 private:
  Patch2D patch_;
  std::vector<std::vector<double>> grids_;
};

/// Greville collocation of an analytic per-lamina thickness.
ThicknessField fit_field(const Patch2D& patch, const LaminaThicknessFunction& analytic,
                         int n_laminae);
/// Equal plies: each lamina carries total / n_laminae.
ThicknessField fit_equal_plies(const Patch2D& patch, const ThicknessFunction& total,
                               int n_laminae);

/// h(x) = h_bar - 2 alpha x on [-a/2, a/2]; thickest at x = -a/2.
ThicknessFunction tapered_x(double a, double h_bar, double alpha);

/// h(x,y) = h_bar - sqrt(2) alpha (x - y); constant along y = x.
ThicknessFunction tapered_diagonal(double a, double h_bar, double alpha);

/// h(x) = h_bar (1 + 2 alpha cos(2 pi n (x - x0) / a)), with x0 the phase origin.
ThicknessFunction sine_wave(double a, double h_bar, double alpha, int n, double x0);

/// Minimum of `h` over an (samples x samples) grid on [-a/2, a/2]^2.
double sampled_minimum(const ThicknessFunction& h, double a, int samples = 101);

}  // namespace vtplate
