#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace vtplate {

/// Orthotropic lamina in material axes (1 = fibre direction).
struct LaminaMaterial {
  double e1 = 1.0;
  double e2 = 1.0;
  double g12 = 0.5;
  double g23 = 0.2;
  double g13 = 0.5;
  double nu12 = 0.25;

  static LaminaMaterial isotropic(double e, double nu);
  /// Ratios relative to E2, as used by the composite benchmarks.
  static LaminaMaterial from_ratios(double e2, double e1_e2, double g12_e2, double g23_e2,
                                    double g13_e2, double nu12);

  double nu21() const { return nu12 * e2 / e1; }
  /// Throws MaterialError unless the plane-stress stiffness is positive definite.
  void validate() const;
};

/// Plane-stress stiffness (xx, yy, xy) and transverse shear stiffness (yz, xz).
struct LaminaStiffness {
  Eigen::Matrix3d q;
  Eigen::Matrix2d qs;
};

LaminaStiffness reduced_stiffness(const LaminaMaterial& mat);

/// Rotates material-axis stiffness into plate axes; theta in degrees from the x-axis.
LaminaStiffness transform_stiffness(const LaminaStiffness& s, double theta_deg);

struct Ply {
  double angle_deg = 0.0;
  LaminaMaterial material;
};

/// Ordered stack of plies, bottom first. Keeps each ply's rotated stiffness.
class Layup {
 public:
  explicit Layup(std::vector<Ply> plies);
  /// Same material for every ply.
  Layup(const LaminaMaterial& mat, std::span<const double> angles_deg);

  int size() const { return static_cast<int>(plies_.size()); }
  const Ply& ply(int k) const { return plies_[k]; }
  const LaminaStiffness& global_stiffness(int k) const { return rotated_[k]; }
  /// Angles mirror about the midplane.
  bool is_symmetric() const;

 private:
  std::vector<Ply> plies_;
  std::vector<LaminaStiffness> rotated_;
};

/// Section stiffness per unit length at one in-plane position.
struct SectionStiffness {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d b = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  Eigen::Matrix2d as = Eigen::Matrix2d::Zero();

  /// [[A, B], [B, D]]
  Eigen::Matrix<double, 6, 6> abd() const;
};

/// Integrates ply stiffness through the thickness between interface coordinates
/// z_1 < ... < z_{n+1}. Throws GeometryError for non-increasing interfaces.
SectionStiffness section_stiffness(const Layup& layup, std::span<const double> interfaces,
                                   double shear_correction = 5.0 / 6.0);

struct Resultants {
  Eigen::Vector3d n = Eigen::Vector3d::Zero();  // in-plane forces
  Eigen::Vector3d m = Eigen::Vector3d::Zero();  // moments
  Eigen::Vector2d q = Eigen::Vector2d::Zero();  // transverse shear (yz, xz)
};

Resultants resultants(const SectionStiffness& s, const Eigen::Vector3d& eps,
                      const Eigen::Vector3d& kappa, const Eigen::Vector2d& gamma);

}  // namespace vtplate
