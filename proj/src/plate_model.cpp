#include "vtplate/plate_model.hpp"

#include <algorithm>
#include <cmath>
#include <ranges>
#include <sstream>

#include <Eigen/LU>

#include "vtplate/error.hpp"
#include "vtplate/quadrature.hpp"

namespace vtplate {

namespace {

bool same_knots(const KnotVector& a, const KnotVector& b) {
  return a.degree() == b.degree() && std::ranges::equal(a.knots(), b.knots());
}

}  // namespace

PlateModel::PlateModel(Patch2D patch, ThicknessField thickness, Layup layup,
                       PlateOptions options)
    : patch_(std::move(patch)), thickness_(std::move(thickness)), layup_(std::move(layup)),
      options_(options) {
  if (!same_knots(patch_.xi(), thickness_.patch().xi()) ||
      !same_knots(patch_.eta(), thickness_.patch().eta()))
    throw GeometryError("thickness field must share the analysis parameter space");
  if (thickness_.lamina_count() != layup_.size()) {
    std::ostringstream os;
    os << "thickness field has " << thickness_.lamina_count() << " laminae, layup has "
       << layup_.size();
    throw GeometryError(os.str());
  }
  if (options_.full_points == 0) options_.full_points = patch_.xi().degree() + 1;
  if (options_.shear_points == 0) options_.shear_points = std::max(1, patch_.xi().degree());
  constrained_.assign(dof_count(), false);
  imperfection_.assign(node_count(), 0.0);
  build_integration();
}

void PlateModel::build_integration() {
  const auto kx = patch_.xi().knots();
  const auto ky = patch_.eta().knots();
  const GaussRule full = gauss_legendre(options_.full_points);
  const GaussRule shear = gauss_legendre(options_.shear_points);

  auto make_points = [&](const GaussRule& rule, ElementData& el, std::vector<QuadPoint>& out) {
    const double hx = 0.5 * (el.xi1 - el.xi0);
    const double hy = 0.5 * (el.eta1 - el.eta0);
    for (std::size_t b = 0; b < rule.points.size(); ++b) {
      for (std::size_t a = 0; a < rule.points.size(); ++a) {
        // Keep the point strictly inside the span so the basis is the element's.
        const ParamPoint pt{el.xi0 + hx * (rule.points[a] + 1.0),
                            el.eta0 + hy * (rule.points[b] + 1.0)};
        const RationalBasis rb = patch_.basis(pt);
        const SurfacePoint sp = patch_.point(pt);
        const Eigen::Matrix2d jinv_t = sp.jacobian.inverse().transpose();
        QuadPoint qp;
        qp.weight = rule.weights[a] * rule.weights[b] * hx * hy * sp.det;
        qp.position = sp.position;
        const std::size_t nen = rb.indices.size();
        qp.r = rb.values;
        qp.rx.resize(nen);
        qp.ry.resize(nen);
        for (std::size_t k = 0; k < nen; ++k) {
          const Eigen::Vector2d g = jinv_t * Eigen::Vector2d(rb.d_xi[k], rb.d_eta[k]);
          qp.rx[k] = g.x();
          qp.ry[k] = g.y();
        }
        const auto z = thickness_.interfaces(rb);
        qp.section = section_stiffness(layup_, z, options_.shear_correction);
        if (el.nodes.empty()) el.nodes = rb.indices;
        out.push_back(std::move(qp));
      }
    }
  };

  for (int sy : patch_.eta().element_spans()) {
    for (int sx : patch_.xi().element_spans()) {
      ElementData el;
      el.span_xi = sx;
      el.span_eta = sy;
      el.xi0 = kx[sx];
      el.xi1 = kx[sx + 1];
      el.eta0 = ky[sy];
      el.eta1 = ky[sy + 1];
      make_points(full, el, el.full);
      make_points(shear, el, el.shear);
      elements_.push_back(std::move(el));
    }
  }
}

std::vector<int> PlateModel::edge_nodes(Edge e) const {
  const int n = patch_.count_xi();
  const int m = patch_.count_eta();
  std::vector<int> nodes;
  switch (e) {
    case Edge::AD:
      for (int j = 0; j < m; ++j) nodes.push_back(patch_.index(0, j));
      break;
    case Edge::BC:
      for (int j = 0; j < m; ++j) nodes.push_back(patch_.index(n - 1, j));
      break;
    case Edge::CD:
      for (int i = 0; i < n; ++i) nodes.push_back(patch_.index(i, 0));
      break;
    case Edge::AB:
      for (int i = 0; i < n; ++i) nodes.push_back(patch_.index(i, m - 1));
      break;
  }
  return nodes;
}

void PlateModel::constrain(int node, Dof d) {
  if (node < 0 || node >= node_count()) throw DomainError("constraint on unknown node");
  constrained_[dof(node, d)] = true;
}

void PlateModel::apply_bc(Support kind, std::span<const Edge> edges) {
  for (Edge e : edges) {
    const bool x_edge = e == Edge::AD || e == Edge::BC;
    for (int node : edge_nodes(e)) {
      switch (kind) {
        case Support::clamped:
          for (int d = 0; d < kDofsPerNode; ++d) constrain(node, static_cast<Dof>(d));
          break;
        case Support::ss1:
          constrain(node, Dof::w);
          constrain(node, x_edge ? Dof::phi_y : Dof::phi_x);
          break;
        case Support::ss2:
          constrain(node, Dof::u);
          constrain(node, Dof::v);
          constrain(node, Dof::w);
          break;
      }
    }
  }
}

void PlateModel::suppress_in_plane_rigid_motion() {
  const int corner_d = patch_.index(0, 0);
  const int corner_c = patch_.index(patch_.count_xi() - 1, 0);
  constrain(corner_d, Dof::u);
  constrain(corner_d, Dof::v);
  constrain(corner_c, Dof::v);
}

void PlateModel::clear_constraints() { constrained_.assign(dof_count(), false); }

int PlateModel::constrained_count() const {
  return static_cast<int>(std::ranges::count(constrained_, true));
}

std::vector<int> PlateModel::free_dofs() const {
  std::vector<int> out;
  out.reserve(dof_count());
  for (int i = 0; i < dof_count(); ++i) {
    if (!constrained_[i]) out.push_back(i);
  }
  return out;
}

void PlateModel::set_imperfection(std::vector<double> w_bar) {
  if (static_cast<int>(w_bar.size()) != node_count())
    throw DomainError("imperfection needs one coefficient per control point");
  imperfection_ = std::move(w_bar);
}

double PlateModel::deflection_at(const Eigen::VectorXd& state, Point2 p) const {
  const RationalBasis rb = patch_.basis(patch_.inverse(p));
  double w = 0.0;
  for (std::size_t k = 0; k < rb.indices.size(); ++k)
    w += rb.values[k] * state[dof(rb.indices[k], Dof::w)];
  return w;
}

int PlateModel::element_at(ParamPoint pt) const {
  const int sx = patch_.xi().find_span(pt.xi);
  const int sy = patch_.eta().find_span(pt.eta);
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    if (elements_[e].span_xi == sx && elements_[e].span_eta == sy) return static_cast<int>(e);
  }
  throw DomainError("no element contains the parameter point");
}

void seed_imperfection(PlateModel& model, const Eigen::VectorXd& mode, double delta, double a) {
  if (mode.size() != model.dof_count()) throw DomainError("mode size does not match the model");
  const int n = model.node_count();
  std::vector<double> w(n);
  double peak = 0.0;
  for (int c = 0; c < n; ++c) {
    w[c] = mode[PlateModel::dof(c, Dof::w)];
    peak = std::max(peak, std::abs(w[c]));
  }
  if (!(peak > 0.0)) throw DomainError("cannot seed an imperfection from a mode without deflection");
  for (double& v : w) v *= delta * a / peak;
  model.set_imperfection(std::move(w));
}

}  // namespace vtplate
