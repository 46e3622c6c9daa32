#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "vtplate/laminate.hpp"
#include "vtplate/nurbs.hpp"
#include "vtplate/thickness_field.hpp"

namespace vtplate {

/// Generalized displacements carried by every control point.
enum class Dof : int { u = 0, v = 1, w = 2, phi_x = 3, phi_y = 4 };
inline constexpr int kDofsPerNode = 5;

/// Plate edges of the square [-a/2, a/2]^2:
/// AD is x = -a/2, BC is x = +a/2, AB is y = +a/2, CD is y = -a/2.
enum class Edge { AD, BC, AB, CD };

enum class Support {
  clamped,  // u = v = w = phi_x = phi_y = 0
  ss1,      // w = 0 and phi_y (x-edges) or phi_x (y-edges) = 0
  ss2,      // u = v = w = 0
};

/// Whether the imperfection slope enters the transverse shear strain.
/// `stress_free` keeps gamma = phi + grad w, so the imperfect plate is unstressed at
/// zero displacement; `included` adds grad w_bar as well.
enum class ImperfectionShear { stress_free, included };

struct PlateOptions {
  double shear_correction = 5.0 / 6.0;
  int full_points = 0;   // per direction; 0 means degree + 1
  int shear_points = 0;  // per direction; 0 means degree (reduced)
  ImperfectionShear imperfection_shear = ImperfectionShear::stress_free;
};

/// Uniform pressure (force/area) and edge compression (force/length, positive = compressive).
struct LoadCase {
  double pressure = 0.0;
  double edge_x = 0.0;  // on AD and BC
  double edge_y = 0.0;  // on AB and CD
};

/// Cached geometry of one integration point.
struct QuadPoint {
  double weight = 0.0;  // Gauss weight times area Jacobian
  Point2 position;
  std::vector<double> r, rx, ry;  // basis and physical gradients, element-local order
  SectionStiffness section;
};

struct ElementData {
  int span_xi = 0;
  int span_eta = 0;
  double xi0 = 0, xi1 = 0, eta0 = 0, eta1 = 0;
  std::vector<int> nodes;  // control-point indices, element-local order
  std::vector<QuadPoint> full;
  std::vector<QuadPoint> shear;
};

/// First-order shear plate on a NURBS patch with variable thickness.
/// Global dof of (node, d) is kDofsPerNode * node + d.
class PlateModel {
 public:
  PlateModel(Patch2D patch, ThicknessField thickness, Layup layup, PlateOptions options = {});

  const Patch2D& patch() const { return patch_; }
  const ThicknessField& thickness() const { return thickness_; }
  const Layup& layup() const { return layup_; }
  const PlateOptions& options() const { return options_; }
  const std::vector<ElementData>& elements() const { return elements_; }

  int node_count() const { return patch_.control_count(); }
  int dof_count() const { return kDofsPerNode * node_count(); }
  static int dof(int node, Dof d) { return kDofsPerNode * node + static_cast<int>(d); }

  std::vector<int> edge_nodes(Edge e) const;
  void constrain(int node, Dof d);
  void apply_bc(Support kind, std::span<const Edge> edges);
  /// Pins u, v at corner D and v at corner C. Needed when no edge restrains in-plane motion.
  void suppress_in_plane_rigid_motion();
  void clear_constraints();
  const std::vector<bool>& constrained() const { return constrained_; }
  int constrained_count() const;
  std::vector<int> free_dofs() const;

  /// Imperfection control coefficients, one per control point.
  void set_imperfection(std::vector<double> w_bar);
  const std::vector<double>& imperfection() const { return imperfection_; }

  /// Transverse deflection w of `state` at a physical point.
  double deflection_at(const Eigen::VectorXd& state, Point2 p) const;
  /// Index of the element containing the parameter point.
  int element_at(ParamPoint pt) const;

 private:
  void build_integration();

  Patch2D patch_;
  ThicknessField thickness_;
  Layup layup_;
  PlateOptions options_;
  std::vector<ElementData> elements_;
  std::vector<bool> constrained_;
  std::vector<double> imperfection_;
};

/// w_bar_c = delta * a * (mode w-components / max |mode w-component|).
void seed_imperfection(PlateModel& model, const Eigen::VectorXd& mode, double delta, double a);

}  // namespace vtplate
