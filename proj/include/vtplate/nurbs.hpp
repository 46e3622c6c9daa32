#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace vtplate {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Location in the normalized parameter space of a patch.
struct ParamPoint {
  double xi = 0.0;
  double eta = 0.0;
};

/// The p+1 nonzero B-spline functions on one knot span.
struct BasisValues {
  int span = 0;  // 0-based index into the knot array
  std::vector<double> values;
  std::vector<double> derivs;  // empty unless requested

  /// Global index of the first nonzero function.
  int first(int degree) const { return span - degree; }
};

/// Open knot vector: the first and last knot are repeated degree+1 times.
class KnotVector {
 public:
  KnotVector(std::vector<double> knots, int degree);

  /// Open knot vector on [0,1] with `n_elems` equal nonzero spans.
  static KnotVector open_uniform(int n_elems, int degree);

  int degree() const { return degree_; }
  /// Number of basis functions n; knots().size() == n + degree + 1.
  int size() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
  std::span<const double> knots() const { return knots_; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

  /// Returns i with knots[i] <= xi < knots[i+1]; the last nonzero span at the right end.
  int find_span(double xi) const;

  BasisValues eval(double xi) const;
  /// Values and first derivatives.
  BasisValues eval_derivs(double xi) const;

  /// Knot averages, one per basis function.
  std::vector<double> greville() const;

  /// Span indices with nonzero length, left to right. One per element.
  std::vector<int> element_spans() const;

 private:
  void basis_into(int span, double xi, std::vector<double>& values,
                  std::vector<double>* derivs) const;

  std::vector<double> knots_;
  int degree_;
};

/// Nonzero 2-D rational basis functions at a parameter point, with parametric gradients.
/// Entry k refers to control point `indices[k]`.
struct RationalBasis {
  std::vector<int> indices;
  std::vector<double> values;
  std::vector<double> d_xi;
  std::vector<double> d_eta;
  int span_xi = 0;
  int span_eta = 0;
};

struct SurfacePoint {
  Point2 position;
  /// d(x,y)/d(xi,eta): column 0 is the xi-derivative.
  Eigen::Matrix2d jacobian;
  double det = 0.0;
};

/// Tensor-product NURBS patch over a planar control net.
/// Control point (i,j) is stored at i + count_xi() * j.
class Patch2D {
 public:
  Patch2D(KnotVector xi, KnotVector eta, std::vector<Point2> control,
          std::vector<double> weights);

  /// Linearly parameterized rectangle [x0,x1]x[y0,y1] with unit weights.
  static Patch2D rectangle(double x0, double x1, double y0, double y1, int elems_xi,
                           int elems_eta, int degree);

  const KnotVector& xi() const { return xi_; }
  const KnotVector& eta() const { return eta_; }
  int count_xi() const { return xi_.size(); }
  int count_eta() const { return eta_.size(); }
  int control_count() const { return count_xi() * count_eta(); }
  int index(int i, int j) const { return i + count_xi() * j; }
  std::span<const Point2> control() const { return control_; }
  std::span<const double> weights() const { return weights_; }

  bool contains(ParamPoint pt) const;

  RationalBasis basis(ParamPoint pt) const;
  /// Position and Jacobian. Throws GeometryError when det <= 0.
  SurfacePoint point(ParamPoint pt) const;
  /// Newton inversion of the geometric map; throws DomainError if the point is outside.
  ParamPoint inverse(Point2 p) const;

 private:
  KnotVector xi_;
  KnotVector eta_;
  std::vector<Point2> control_;
  std::vector<double> weights_;
};

}  // namespace vtplate
