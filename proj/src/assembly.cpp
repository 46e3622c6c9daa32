#include "vtplate/assembly.hpp"

#include <cmath>
#include <exception>

#include <Eigen/LU>

#include "vtplate/error.hpp"
#include "vtplate/quadrature.hpp"

namespace vtplate {

namespace {

constexpr int U = static_cast<int>(Dof::u);
constexpr int V = static_cast<int>(Dof::v);
constexpr int W = static_cast<int>(Dof::w);
constexpr int PX = static_cast<int>(Dof::phi_x);
constexpr int PY = static_cast<int>(Dof::phi_y);

Eigen::VectorXd gather(const Eigen::VectorXd& state, const std::vector<int>& nodes) {
  Eigen::VectorXd ue(kDofsPerNode * nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (int d = 0; d < kDofsPerNode; ++d) ue[kDofsPerNode * a + d] = state[kDofsPerNode * nodes[a] + d];
  }
  return ue;
}

// Strain operators from basis data at one point.
StrainOperators evaluate(const std::vector<int>& nodes, const std::vector<double>& r,
                         const std::vector<double>& rx, const std::vector<double>& ry,
                         const Eigen::VectorXd& ue, const std::vector<double>& w_bar,
                         Kinematics kin, ImperfectionShear shear_mode) {
  const int nen = static_cast<int>(nodes.size());
  const int ndof = kDofsPerNode * nen;
  const bool nonlinear = kin == Kinematics::nonlinear;

  double ux = 0, uy = 0, vx = 0, vy = 0, wx = 0, wy = 0, px = 0, py = 0;
  double px_x = 0, px_y = 0, py_x = 0, py_y = 0, wbx = 0, wby = 0;
  for (int a = 0; a < nen; ++a) {
    const double* d = ue.data() + kDofsPerNode * a;
    ux += rx[a] * d[U];
    uy += ry[a] * d[U];
    vx += rx[a] * d[V];
    vy += ry[a] * d[V];
    wx += rx[a] * d[W];
    wy += ry[a] * d[W];
    px += r[a] * d[PX];
    py += r[a] * d[PY];
    px_x += rx[a] * d[PX];
    px_y += ry[a] * d[PX];
    py_x += rx[a] * d[PY];
    py_y += ry[a] * d[PY];
    wbx += rx[a] * w_bar[nodes[a]];
    wby += ry[a] * w_bar[nodes[a]];
  }
  if (!nonlinear) wbx = wby = 0.0;

  StrainOperators op;
  op.nodes = nodes;
  GeneralizedStrains& s = op.strains;
  s.eps = Eigen::Vector3d(ux, vy, uy + vx);
  if (nonlinear) {
    s.eps.x() += 0.5 * wx * wx + wx * wbx;
    s.eps.y() += 0.5 * wy * wy + wy * wby;
    s.eps.z() += wx * wy + wbx * wy + wx * wby;
  }
  s.kappa = Eigen::Vector3d(px_x, py_y, px_y + py_x);
  const double shear_bar = shear_mode == ImperfectionShear::included ? 1.0 : 0.0;
  s.gamma = Eigen::Vector2d(py + wy + shear_bar * wby, px + wx + shear_bar * wbx);

  op.membrane = Eigen::MatrixXd::Zero(3, ndof);
  op.membrane_nl = Eigen::MatrixXd::Zero(3, ndof);
  op.bending = Eigen::MatrixXd::Zero(3, ndof);
  op.shear = Eigen::MatrixXd::Zero(2, ndof);
  const double sx = wx + wbx;
  const double sy = wy + wby;
  for (int a = 0; a < nen; ++a) {
    const int c = kDofsPerNode * a;
    op.membrane(0, c + U) = rx[a];
    op.membrane(1, c + V) = ry[a];
    op.membrane(2, c + U) = ry[a];
    op.membrane(2, c + V) = rx[a];
    if (nonlinear) {
      op.membrane_nl(0, c + W) = sx * rx[a];
      op.membrane_nl(1, c + W) = sy * ry[a];
      op.membrane_nl(2, c + W) = sy * rx[a] + sx * ry[a];
    }
    op.bending(0, c + PX) = rx[a];
    op.bending(1, c + PY) = ry[a];
    op.bending(2, c + PX) = ry[a];
    op.bending(2, c + PY) = rx[a];
    op.shear(0, c + PY) = r[a];
    op.shear(0, c + W) = ry[a];
    op.shear(1, c + PX) = r[a];
    op.shear(1, c + W) = rx[a];
  }
  return op;
}

StrainOperators evaluate_cached(const PlateModel& model, const ElementData& el,
                                const QuadPoint& qp, const Eigen::VectorXd& ue, Kinematics kin) {
  return evaluate(el.nodes, qp.r, qp.rx, qp.ry, ue, model.imperfection(), kin,
                  model.options().imperfection_shear);
}

// Membrane plus bending strain vector and its 6 x ndof variation.
std::pair<Eigen::Matrix<double, 6, 1>, Eigen::MatrixXd> membrane_bending(const StrainOperators& op) {
  Eigen::Matrix<double, 6, 1> e;
  e << op.strains.eps, op.strains.kappa;
  Eigen::MatrixXd b(6, op.membrane.cols());
  b << op.membrane + op.membrane_nl, op.bending;
  return {e, b};
}

template <typename ElementFn>
std::vector<ElementContribution> element_loop(const PlateModel& model, ElementFn&& fn,
                                              bool parallel) {
  const int ne = static_cast<int>(model.elements().size());
  std::vector<ElementContribution> parts(ne);
  if (!parallel) {
    for (int e = 0; e < ne; ++e) parts[e] = fn(e);
    return parts;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int e = 0; e < ne; ++e) {
    try {
      parts[e] = fn(e);
    } catch (...) {
#pragma omp critical(vtplate_assembly_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return parts;
}

AssembledSystem scatter(const PlateModel& model, const std::vector<ElementContribution>& parts,
                        bool with_tangent) {
  AssembledSystem out;
  const int n = model.dof_count();
  out.internal_force = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  if (with_tangent && !parts.empty()) {
    const auto per = parts.front().tangent.size();
    triplets.reserve(per * parts.size());
  }
  for (std::size_t e = 0; e < parts.size(); ++e) {
    const auto& nodes = model.elements()[e].nodes;
    const int ndof = kDofsPerNode * static_cast<int>(nodes.size());
    auto global = [&](int i) { return kDofsPerNode * nodes[i / kDofsPerNode] + i % kDofsPerNode; };
    for (int i = 0; i < ndof; ++i) out.internal_force[global(i)] += parts[e].force[i];
    if (!with_tangent) continue;
    for (int j = 0; j < ndof; ++j) {
      const int gj = global(j);
      for (int i = 0; i < ndof; ++i) {
        const double v = parts[e].tangent(i, j);
        if (v != 0.0) triplets.emplace_back(global(i), gj, v);
      }
    }
  }
  if (with_tangent) {
    out.tangent.resize(n, n);
    out.tangent.setFromTriplets(triplets.begin(), triplets.end());
  }
  return out;
}

}  // namespace

StrainOperators strain_operators(const PlateModel& model, const Eigen::VectorXd& state,
                                 ParamPoint pt, Kinematics kin) {
  const RationalBasis rb = model.patch().basis(pt);
  const SurfacePoint sp = model.patch().point(pt);
  const Eigen::Matrix2d jinv_t = sp.jacobian.inverse().transpose();
  std::vector<double> rx(rb.indices.size()), ry(rb.indices.size());
  for (std::size_t k = 0; k < rb.indices.size(); ++k) {
    const Eigen::Vector2d g = jinv_t * Eigen::Vector2d(rb.d_xi[k], rb.d_eta[k]);
    rx[k] = g.x();
    ry[k] = g.y();
  }
  return evaluate(rb.indices, rb.values, rx, ry, gather(state, rb.indices), model.imperfection(),
                  kin, model.options().imperfection_shear);
}

QuadraturePointState point_state(const PlateModel& model, const Eigen::VectorXd& state,
                                 ParamPoint pt, Kinematics kin) {
  QuadraturePointState qs;
  qs.strains = strain_operators(model, state, pt, kin).strains;
  qs.section = section_stiffness(model.layup(), model.thickness().interfaces(pt),
                                 model.options().shear_correction);
  qs.resultants = resultants(qs.section, qs.strains.eps, qs.strains.kappa, qs.strains.gamma);
  return qs;
}

ElementContribution element_contribution(const PlateModel& model, const Eigen::VectorXd& state,
                                         int element, Kinematics kin, bool with_tangent) {
  const ElementData& el = model.elements().at(element);
  const int ndof = kDofsPerNode * static_cast<int>(el.nodes.size());
  const Eigen::VectorXd ue = gather(state, el.nodes);
  ElementContribution out;
  out.force = Eigen::VectorXd::Zero(ndof);
  if (with_tangent) out.tangent = Eigen::MatrixXd::Zero(ndof, ndof);

  for (const QuadPoint& qp : el.full) {
    const StrainOperators op = evaluate_cached(model, el, qp, ue, kin);
    const auto [e, b] = membrane_bending(op);
    const Eigen::Matrix<double, 6, 6> c = qp.section.abd();
    const Eigen::Matrix<double, 6, 1> stress = c * e;
    out.force.noalias() += qp.weight * (b.transpose() * stress);
    if (!with_tangent) continue;
    out.tangent.noalias() += qp.weight * (b.transpose() * c * b);
    if (kin == Kinematics::nonlinear) {
      // Second variation of the quadratic slope terms, weighted by N.
      const double nx = stress[0], ny = stress[1], nxy = stress[2];
      const int nen = static_cast<int>(el.nodes.size());
      for (int a = 0; a < nen; ++a) {
        const double ta = qp.rx[a] * nx + qp.ry[a] * nxy;
        const double sa = qp.rx[a] * nxy + qp.ry[a] * ny;
        for (int bb = 0; bb < nen; ++bb) {
          out.tangent(kDofsPerNode * a + W, kDofsPerNode * bb + W) +=
              qp.weight * (ta * qp.rx[bb] + sa * qp.ry[bb]);
        }
      }
    }
  }
  for (const QuadPoint& qp : el.shear) {
    const StrainOperators op = evaluate_cached(model, el, qp, ue, kin);
    const Eigen::Vector2d q = qp.section.as * op.strains.gamma;
    out.force.noalias() += qp.weight * (op.shear.transpose() * q);
    if (with_tangent)
      out.tangent.noalias() += qp.weight * (op.shear.transpose() * qp.section.as * op.shear);
  }
  return out;
}

Eigen::VectorXd element_internal_force(const PlateModel& model, const Eigen::VectorXd& state,
                                       int element, Kinematics kin) {
  return element_contribution(model, state, element, kin, false).force;
}

Eigen::MatrixXd element_tangent(const PlateModel& model, const Eigen::VectorXd& state,
                                int element, Kinematics kin) {
  return element_contribution(model, state, element, kin, true).tangent;
}

double element_energy(const PlateModel& model, const Eigen::VectorXd& state, int element,
                      Kinematics kin) {
  const ElementData& el = model.elements().at(element);
  const Eigen::VectorXd ue = gather(state, el.nodes);
  double energy = 0.0;
  for (const QuadPoint& qp : el.full) {
    const StrainOperators op = evaluate_cached(model, el, qp, ue, kin);
    Eigen::Matrix<double, 6, 1> e;
    e << op.strains.eps, op.strains.kappa;
    energy += 0.5 * qp.weight * e.dot(qp.section.abd() * e);
  }
  for (const QuadPoint& qp : el.shear) {
    const StrainOperators op = evaluate_cached(model, el, qp, ue, kin);
    energy += 0.5 * qp.weight * op.strains.gamma.dot(qp.section.as * op.strains.gamma);
  }
  return energy;
}

AssembledSystem assemble(const PlateModel& model, const Eigen::VectorXd& state, Kinematics kin) {
  auto parts = element_loop(
      model, [&](int e) { return element_contribution(model, state, e, kin, true); }, true);
  return scatter(model, parts, true);
}

AssembledSystem assemble_serial(const PlateModel& model, const Eigen::VectorXd& state,
                                Kinematics kin) {
  auto parts = element_loop(
      model, [&](int e) { return element_contribution(model, state, e, kin, true); }, false);
  return scatter(model, parts, true);
}

Eigen::VectorXd internal_force(const PlateModel& model, const Eigen::VectorXd& state,
                               Kinematics kin) {
  auto parts = element_loop(
      model, [&](int e) { return element_contribution(model, state, e, kin, false); }, true);
  return scatter(model, parts, false).internal_force;
}

double strain_energy(const PlateModel& model, const Eigen::VectorXd& state, Kinematics kin) {
  double energy = 0.0;
  const int ne = static_cast<int>(model.elements().size());
#pragma omp parallel for reduction(+ : energy)
  for (int e = 0; e < ne; ++e) energy += element_energy(model, state, e, kin);
  return energy;
}

SparseMatrix geometric_stiffness(const PlateModel& model, const Eigen::VectorXd& prestress) {
  auto parts = element_loop(
      model,
      [&](int e) {
        const ElementData& el = model.elements()[e];
        const int nen = static_cast<int>(el.nodes.size());
        const Eigen::VectorXd ue = gather(prestress, el.nodes);
        ElementContribution out;
        out.force = Eigen::VectorXd::Zero(kDofsPerNode * nen);
        out.tangent = Eigen::MatrixXd::Zero(kDofsPerNode * nen, kDofsPerNode * nen);
        for (const QuadPoint& qp : el.full) {
          const StrainOperators op = evaluate_cached(model, el, qp, ue, Kinematics::linear);
          const Eigen::Vector3d n =
              qp.section.a * op.strains.eps + qp.section.b * op.strains.kappa;
          for (int a = 0; a < nen; ++a) {
            const double ta = qp.rx[a] * n[0] + qp.ry[a] * n[2];
            const double sa = qp.rx[a] * n[2] + qp.ry[a] * n[1];
            for (int b = 0; b < nen; ++b) {
              out.tangent(kDofsPerNode * a + W, kDofsPerNode * b + W) +=
                  qp.weight * (ta * qp.rx[b] + sa * qp.ry[b]);
            }
          }
        }
        return out;
      },
      true);
  return scatter(model, parts, true).tangent;
}

Eigen::VectorXd load_vector(const PlateModel& model, const LoadCase& load) {
  const int n = model.dof_count();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  if (load.pressure != 0.0) {
    for (const ElementData& el : model.elements()) {
      for (const QuadPoint& qp : el.full) {
        for (std::size_t a = 0; a < el.nodes.size(); ++a)
          f[PlateModel::dof(el.nodes[a], Dof::w)] += qp.weight * qp.r[a] * load.pressure;
      }
    }
  }

  const Patch2D& patch = model.patch();
  const GaussRule rule = gauss_legendre(std::max(patch.xi().degree(), patch.eta().degree()) + 1);
  // Compressive resultant on one edge: traction -N * outward normal.
  auto edge_load = [&](bool along_eta, bool at_max, double resultant) {
    if (resultant == 0.0) return;
    const KnotVector& kv = along_eta ? patch.eta() : patch.xi();
    const KnotVector& fixed = along_eta ? patch.xi() : patch.eta();
    const double fixed_param = at_max ? fixed.back() : fixed.front();
    const auto knots = kv.knots();
    for (int span : kv.element_spans()) {
      const double t0 = knots[span];
      const double t1 = knots[span + 1];
      const double half = 0.5 * (t1 - t0);
      for (std::size_t g = 0; g < rule.points.size(); ++g) {
        const double t = t0 + half * (rule.points[g] + 1.0);
        const ParamPoint pt = along_eta ? ParamPoint{fixed_param, t} : ParamPoint{t, fixed_param};
        const RationalBasis rb = patch.basis(pt);
        const SurfacePoint sp = patch.point(pt);
        const Eigen::Vector2d tangent = sp.jacobian.col(along_eta ? 1 : 0);
        const Eigen::Vector2d across = sp.jacobian.col(along_eta ? 0 : 1);
        Eigen::Vector2d normal(tangent.y(), -tangent.x());
        normal.normalize();
        // Point the normal away from the interior.
        if ((normal.dot(across) > 0.0) != at_max) normal = -normal;
        const double ds = tangent.norm() * half * rule.weights[g];
        const Eigen::Vector2d traction = -resultant * normal;
        for (std::size_t a = 0; a < rb.indices.size(); ++a) {
          if (rb.values[a] == 0.0) continue;
          f[PlateModel::dof(rb.indices[a], Dof::u)] += traction.x() * rb.values[a] * ds;
          f[PlateModel::dof(rb.indices[a], Dof::v)] += traction.y() * rb.values[a] * ds;
        }
      }
    }
  };
  edge_load(true, false, load.edge_x);   // AD
  edge_load(true, true, load.edge_x);    // BC
  edge_load(false, false, load.edge_y);  // CD
  edge_load(false, true, load.edge_y);   // AB
  return f;
}

}  // namespace vtplate
