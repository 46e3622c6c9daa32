#include <algorithm>
#include <cmath>
#include <vector>

#include "vtplate/error.hpp"
#include "vtplate/solvers.hpp"

namespace vtplate {

PlateEquilibrium::PlateEquilibrium(const PlateModel& model, const LoadCase& reference,
                                   std::optional<Point2> probe)
    : model_(model), free_(model.free_dofs()), full_to_free_(model.dof_count(), -1) {
  if (free_.empty()) throw DomainError("every dof is constrained");
  for (std::size_t i = 0; i < free_.size(); ++i) full_to_free_[free_[i]] = static_cast<int>(i);
  load_ = reduce(load_vector(model, reference));
  const Point2 at = probe.value_or(Point2{0.0, 0.0});
  const RationalBasis rb = model.patch().basis(model.patch().inverse(at));
  for (std::size_t k = 0; k < rb.indices.size(); ++k) {
    const int r = full_to_free_[PlateModel::dof(rb.indices[k], Dof::w)];
    if (r >= 0 && rb.values[k] != 0.0) probe_weights_.emplace_back(r, rb.values[k]);
  }
}

Eigen::VectorXd PlateEquilibrium::expand(const Eigen::VectorXd& reduced) const {
  if (reduced.size() != size()) throw DomainError("reduced state size mismatch");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(model_.dof_count());
  for (std::size_t i = 0; i < free_.size(); ++i) full[free_[i]] = reduced[static_cast<Eigen::Index>(i)];
  return full;
}

Eigen::VectorXd PlateEquilibrium::reduce(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(size());
  for (std::size_t i = 0; i < free_.size(); ++i) out[static_cast<Eigen::Index>(i)] = full[free_[i]];
  return out;
}

SparseMatrix PlateEquilibrium::reduce(const SparseMatrix& full) const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(full.nonZeros()));
  for (int c = 0; c < full.outerSize(); ++c) {
    const int rc = full_to_free_[c];
    if (rc < 0) continue;
    for (SparseMatrix::InnerIterator it(full, c); it; ++it) {
      const int rr = full_to_free_[it.row()];
      if (rr >= 0) trip.emplace_back(rr, rc, it.value());
    }
  }
  SparseMatrix out(size(), size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

std::pair<Eigen::VectorXd, SparseMatrix> PlateEquilibrium::linearize(const Eigen::VectorXd& u) const {
  AssembledSystem sys = assemble(model_, expand(u));
  return {reduce(sys.internal_force), reduce(sys.tangent)};
}

Eigen::VectorXd PlateEquilibrium::internal_force(const Eigen::VectorXd& u) const {
  return reduce(vtplate::internal_force(model_, expand(u)));
}

double PlateEquilibrium::probe(const Eigen::VectorXd& u) const {
  double w = 0.0;
  for (const auto& [r, c] : probe_weights_) w += c * u[r];
  return w;
}

Eigen::VectorXd linear_bending(const PlateModel& model, const LoadCase& load) {
  const PlateEquilibrium problem(model, load);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.dof_count());
  const SparseMatrix k = problem.reduce(assemble(model, zero, Kinematics::linear).tangent);
  return problem.expand(linear_solve(k, problem.reference_load()));
}

PlateBuckling plate_linear_buckling(const PlateModel& model, const LoadCase& reference) {
  LoadCase in_plane = reference;
  in_plane.pressure = 0.0;
  if (in_plane.edge_x == 0.0 && in_plane.edge_y == 0.0)
    throw DomainError("buckling needs an in-plane edge load");
  const PlateEquilibrium problem(model, in_plane);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.dof_count());
  const SparseMatrix k = problem.reduce(assemble(model, zero, Kinematics::linear).tangent);

  PlateBuckling out;
  out.prestress = problem.expand(linear_solve(k, problem.reference_load()));
  const SparseMatrix kg = -problem.reduce(geometric_stiffness(model, out.prestress));
  const BucklingResult br = linear_buckling(k, kg);
  out.load_factor = br.load_factor;
  out.mode = problem.expand(br.mode);

  double peak = 0.0;
  for (int c = 0; c < model.node_count(); ++c) {
    const double w = out.mode[PlateModel::dof(c, Dof::w)];
    if (std::abs(w) > std::abs(peak)) peak = w;
  }
  if (peak == 0.0) throw StabilityError("buckling mode has no transverse deflection");
  out.mode /= peak;
  return out;
}

}  // namespace vtplate
