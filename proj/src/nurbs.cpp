#include "vtplate/nurbs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "vtplate/error.hpp"

namespace vtplate {

namespace {

// Relative slack when testing whether a parameter lies inside the patch.
constexpr double kParamSlack = 1e-12;

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
  if (degree_ < 0) throw DomainError("knot vector degree must be non-negative");
  const int p = degree_;
  if (static_cast<int>(knots_.size()) < 2 * p + 2)
    throw DomainError("knot vector too short: need at least 2(p+1) knots");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] >= knots_[i - 1])) throw DomainError("knot vector must be non-decreasing");
  }
  if (!(knots_.back() > knots_.front())) throw DomainError("knot vector spans an empty patch");
  const std::size_t last = knots_.size() - 1;
  for (int k = 0; k <= p; ++k) {
    if (knots_[k] != knots_.front() || knots_[last - k] != knots_.back())
      throw DomainError("knot vector is not open: end knots need multiplicity p+1");
  }
  if (knots_[p + 1] == knots_.front() || knots_[last - p - 1] == knots_.back())
    throw DomainError("end knot multiplicity exceeds p+1");
}

KnotVector KnotVector::open_uniform(int n_elems, int degree) {
  if (n_elems < 1) throw DomainError("open_uniform: need at least one element");
  if (degree < 1) throw DomainError("open_uniform: degree must be >= 1");
  std::vector<double> k;
  k.reserve(n_elems + 2 * degree + 1);
  for (int i = 0; i < degree; ++i) k.push_back(0.0);
  for (int e = 0; e <= n_elems; ++e) k.push_back(static_cast<double>(e) / n_elems);
  for (int i = 0; i < degree; ++i) k.push_back(1.0);
  return KnotVector(std::move(k), degree);
}

int KnotVector::find_span(double xi) const {
  const double lo = front();
  const double hi = back();
  const double slack = kParamSlack * (hi - lo);
  if (!(xi >= lo - slack && xi <= hi + slack)) {
    std::ostringstream os;
    os << "parameter " << xi << " outside patch [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
  xi = std::clamp(xi, lo, hi);
  const int n = size();
  if (xi >= knots_[n]) {
    // Right boundary: last span of nonzero length.
    int i = n - 1;
    while (i > degree_ && knots_[i] == knots_[i + 1]) --i;
    return i;
  }
  auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + n + 1, xi);
  return static_cast<int>(it - knots_.begin()) - 1;
}

void KnotVector::basis_into(int span, double xi, std::vector<double>& values,
                            std::vector<double>* derivs) const {
  const int p = degree_;
  xi = std::clamp(xi, front(), back());
  // ndu: upper triangle holds basis values, lower triangle knot differences.
  std::vector<double> ndu((p + 1) * (p + 1), 0.0);
  auto at = [&](int r, int c) -> double& { return ndu[r * (p + 1) + c]; };
  std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
  at(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - knots_[span + 1 - j];
    right[j] = knots_[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      at(j, r) = right[r + 1] + left[j - r];
      const double temp = at(j, r) != 0.0 ? at(r, j - 1) / at(j, r) : 0.0;
      at(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    at(j, j) = saved;
  }
  values.resize(p + 1);
  for (int j = 0; j <= p; ++j) values[j] = at(j, p);
  if (!derivs) return;
  derivs->assign(p + 1, 0.0);
  if (p == 0) return;
  for (int r = 0; r <= p; ++r) {
    double d = 0.0;
    if (r >= 1 && at(p, r - 1) != 0.0) d += at(r - 1, p - 1) / at(p, r - 1);
    if (r <= p - 1 && at(p, r) != 0.0) d -= at(r, p - 1) / at(p, r);
    (*derivs)[r] = p * d;
  }
}

BasisValues KnotVector::eval(double xi) const {
  BasisValues out;
  out.span = find_span(xi);
  basis_into(out.span, xi, out.values, nullptr);
  return out;
}

BasisValues KnotVector::eval_derivs(double xi) const {
  BasisValues out;
  out.span = find_span(xi);
  basis_into(out.span, xi, out.values, &out.derivs);
  return out;
}

std::vector<double> KnotVector::greville() const {
  const int n = size();
  const int p = degree_;
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    if (p == 0) {
      g[i] = 0.5 * (knots_[i] + knots_[i + 1]);
      continue;
    }
    double s = 0.0;
    for (int k = 1; k <= p; ++k) s += knots_[i + k];
    g[i] = s / p;
  }
  return g;
}

std::vector<int> KnotVector::element_spans() const {
  std::vector<int> spans;
  for (int i = degree_; i < size(); ++i) {
    if (knots_[i] < knots_[i + 1]) spans.push_back(i);
  }
  return spans;
}

Patch2D::Patch2D(KnotVector xi, KnotVector eta, std::vector<Point2> control,
                 std::vector<double> weights)
    : xi_(std::move(xi)), eta_(std::move(eta)), control_(std::move(control)),
      weights_(std::move(weights)) {
  const std::size_t n = static_cast<std::size_t>(xi_.size()) * eta_.size();
  if (control_.size() != n)
    throw DomainError("control net size does not match the basis counts");
  if (weights_.empty()) weights_.assign(n, 1.0);
  if (weights_.size() != n) throw DomainError("weight count does not match the control net");
  for (double w : weights_) {
    if (!(w > 0.0)) throw DomainError("control weights must be strictly positive");
  }
}

Patch2D Patch2D::rectangle(double x0, double x1, double y0, double y1, int elems_xi,
                           int elems_eta, int degree) {
  if (!(x1 > x0) || !(y1 > y0)) throw GeometryError("rectangle has non-positive extent");
  KnotVector kx = KnotVector::open_uniform(elems_xi, degree);
  KnotVector ky = KnotVector::open_uniform(elems_eta, degree);
  const auto gx = kx.greville();
  const auto gy = ky.greville();
  std::vector<Point2> net;
  net.reserve(gx.size() * gy.size());
  for (double gj : gy) {
    for (double gi : gx) net.push_back({x0 + (x1 - x0) * gi, y0 + (y1 - y0) * gj});
  }
  return Patch2D(std::move(kx), std::move(ky), std::move(net), {});
}

bool Patch2D::contains(ParamPoint pt) const {
  const double sx = kParamSlack * (xi_.back() - xi_.front());
  const double sy = kParamSlack * (eta_.back() - eta_.front());
  return pt.xi >= xi_.front() - sx && pt.xi <= xi_.back() + sx && pt.eta >= eta_.front() - sy &&
         pt.eta <= eta_.back() + sy;
}

RationalBasis Patch2D::basis(ParamPoint pt) const {
  const BasisValues bx = xi_.eval_derivs(pt.xi);
  const BasisValues by = eta_.eval_derivs(pt.eta);
  const int p = xi_.degree();
  const int q = eta_.degree();
  const int fx = bx.first(p);
  const int fy = by.first(q);

  RationalBasis out;
  out.span_xi = bx.span;
  out.span_eta = by.span;
  const int count = (p + 1) * (q + 1);
  out.indices.resize(count);
  out.values.resize(count);
  out.d_xi.resize(count);
  out.d_eta.resize(count);

  double wsum = 0.0, wsum_xi = 0.0, wsum_eta = 0.0;
  int k = 0;
  for (int b = 0; b <= q; ++b) {
    for (int a = 0; a <= p; ++a, ++k) {
      const int idx = index(fx + a, fy + b);
      const double w = weights_[idx];
      out.indices[k] = idx;
      out.values[k] = bx.values[a] * by.values[b] * w;
      out.d_xi[k] = bx.derivs[a] * by.values[b] * w;
      out.d_eta[k] = bx.values[a] * by.derivs[b] * w;
      wsum += out.values[k];
      wsum_xi += out.d_xi[k];
      wsum_eta += out.d_eta[k];
    }
  }
  for (k = 0; k < count; ++k) {
    const double r = out.values[k] / wsum;
    out.d_xi[k] = (out.d_xi[k] - r * wsum_xi) / wsum;
    out.d_eta[k] = (out.d_eta[k] - r * wsum_eta) / wsum;
    out.values[k] = r;
  }
  return out;
}

SurfacePoint Patch2D::point(ParamPoint pt) const {
  const RationalBasis rb = basis(pt);
  SurfacePoint sp;
  sp.jacobian.setZero();
  for (std::size_t k = 0; k < rb.indices.size(); ++k) {
    const Point2& c = control_[rb.indices[k]];
    sp.position.x += rb.values[k] * c.x;
    sp.position.y += rb.values[k] * c.y;
    sp.jacobian(0, 0) += rb.d_xi[k] * c.x;
    sp.jacobian(0, 1) += rb.d_eta[k] * c.x;
    sp.jacobian(1, 0) += rb.d_xi[k] * c.y;
    sp.jacobian(1, 1) += rb.d_eta[k] * c.y;
  }
  sp.det = sp.jacobian.determinant();
  if (!(sp.det > 0.0)) {
    std::ostringstream os;
    os << "non-positive Jacobian determinant " << sp.det << " at (" << pt.xi << ", " << pt.eta
       << ")";
    throw GeometryError(os.str());
  }
  return sp;
}

ParamPoint Patch2D::inverse(Point2 p) const {
  ParamPoint pt{0.5 * (xi_.front() + xi_.back()), 0.5 * (eta_.front() + eta_.back())};
  double scale = 0.0;
  for (const auto& c : control_) scale = std::max({scale, std::abs(c.x), std::abs(c.y)});
  const double tol = 1e-13 * std::max(scale, 1.0);
  for (int it = 0; it < 50; ++it) {
    const SurfacePoint sp = point(pt);
    const Eigen::Vector2d r(p.x - sp.position.x, p.y - sp.position.y);
    if (r.norm() <= tol) return pt;
    const Eigen::Vector2d d = sp.jacobian.lu().solve(r);
    pt.xi = std::clamp(pt.xi + d.x(), xi_.front(), xi_.back());
    pt.eta = std::clamp(pt.eta + d.y(), eta_.front(), eta_.back());
  }
  const SurfacePoint sp = point(pt);
  if (std::hypot(p.x - sp.position.x, p.y - sp.position.y) > 1e-9 * std::max(scale, 1.0)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") is outside the patch";
    throw DomainError(os.str());
  }
  return pt;
}

}  // namespace vtplate
