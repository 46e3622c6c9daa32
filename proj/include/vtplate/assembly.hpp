#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "vtplate/plate_model.hpp"

namespace vtplate {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// `linear` drops the von-Karman and imperfection terms entirely.
enum class Kinematics { nonlinear, linear };

struct GeneralizedStrains {
  Eigen::Vector3d eps = Eigen::Vector3d::Zero();    // (xx, yy, xy)
  Eigen::Vector3d kappa = Eigen::Vector3d::Zero();  // (xx, yy, xy)
  Eigen::Vector2d gamma = Eigen::Vector2d::Zero();  // (yz, xz)
};

/// Strains and their variations at one point. Columns follow the element-local
/// dof order (node-major, kDofsPerNode per node).
struct StrainOperators {
  std::vector<int> nodes;
  GeneralizedStrains strains;
  Eigen::MatrixXd membrane;     // 3 x ndof, linear in-plane part
  Eigen::MatrixXd membrane_nl;  // 3 x ndof, slope terms (w + w_bar)
  Eigen::MatrixXd bending;      // 3 x ndof
  Eigen::MatrixXd shear;        // 2 x ndof
};

StrainOperators strain_operators(const PlateModel& model, const Eigen::VectorXd& state,
                                 ParamPoint pt, Kinematics kin = Kinematics::nonlinear);

/// Strains and resultants at a point, with the local section.
struct QuadraturePointState {
  GeneralizedStrains strains;
  Resultants resultants;
  SectionStiffness section;
};

QuadraturePointState point_state(const PlateModel& model, const Eigen::VectorXd& state,
                                 ParamPoint pt, Kinematics kin = Kinematics::nonlinear);

struct ElementContribution {
  Eigen::VectorXd force;
  Eigen::MatrixXd tangent;  // empty when not requested
};

ElementContribution element_contribution(const PlateModel& model, const Eigen::VectorXd& state,
                                         int element, Kinematics kin, bool with_tangent);
Eigen::VectorXd element_internal_force(const PlateModel& model, const Eigen::VectorXd& state,
                                       int element, Kinematics kin = Kinematics::nonlinear);
Eigen::MatrixXd element_tangent(const PlateModel& model, const Eigen::VectorXd& state,
                                int element, Kinematics kin = Kinematics::nonlinear);
double element_energy(const PlateModel& model, const Eigen::VectorXd& state, int element,
                      Kinematics kin = Kinematics::nonlinear);

struct AssembledSystem {
  Eigen::VectorXd internal_force;
  SparseMatrix tangent;
};

/// Element loop in parallel (OpenMP), scatter serialized. Full-size, unconstrained.
AssembledSystem assemble(const PlateModel& model, const Eigen::VectorXd& state,
                         Kinematics kin = Kinematics::nonlinear);
/// Single-threaded reference of assemble().
AssembledSystem assemble_serial(const PlateModel& model, const Eigen::VectorXd& state,
                                Kinematics kin = Kinematics::nonlinear);

Eigen::VectorXd internal_force(const PlateModel& model, const Eigen::VectorXd& state,
                               Kinematics kin = Kinematics::nonlinear);
double strain_energy(const PlateModel& model, const Eigen::VectorXd& state,
                     Kinematics kin = Kinematics::nonlinear);

/// Stress stiffness of the membrane resultants produced by `prestress` under linear
/// kinematics. Acts on w dofs only.
SparseMatrix geometric_stiffness(const PlateModel& model, const Eigen::VectorXd& prestress);

/// Consistent nodal loads of the load case.
Eigen::VectorXd load_vector(const PlateModel& model, const LoadCase& load);

}  // namespace vtplate
