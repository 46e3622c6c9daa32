#include "vtplate/thickness_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "vtplate/error.hpp"
#include "vtplate/quadrature.hpp"

namespace vtplate {

ThicknessField::ThicknessField(Patch2D patch, std::vector<std::vector<double>> grids)
    : patch_(std::move(patch)), grids_(std::move(grids)) {
  if (grids_.empty()) throw GeometryError("thickness field needs at least one lamina");
  const std::size_t n = patch_.control_count();
  for (std::size_t k = 0; k < grids_.size(); ++k) {
    if (grids_[k].size() != n) {
      std::ostringstream os;
      os << "lamina " << k << " has " << grids_[k].size() << " control thicknesses, expected "
         << n;
      throw GeometryError(os.str());
    }
    for (double h : grids_[k]) {
      if (!(h > 0.0)) throw GeometryError("control thickness parameters must be positive");
    }
  }
}

const std::vector<double>& ThicknessField::control(int k) const {
  if (k < 0 || k >= lamina_count()) throw DomainError("lamina index out of range");
  return grids_[k];
}

double ThicknessField::lamina_thickness(const RationalBasis& rb, int k) const {
  const auto& g = control(k);
  double h = 0.0;
  for (std::size_t c = 0; c < rb.indices.size(); ++c) h += rb.values[c] * g[rb.indices[c]];
  return h;
}

double ThicknessField::lamina_thickness(ParamPoint pt, int k) const {
  return lamina_thickness(patch_.basis(pt), k);
}

double ThicknessField::total(const RationalBasis& rb) const {
  double h = 0.0;
  for (int k = 0; k < lamina_count(); ++k) h += lamina_thickness(rb, k);
  return h;
}

double ThicknessField::total(ParamPoint pt) const { return total(patch_.basis(pt)); }

Eigen::Vector2d ThicknessField::total_gradient(ParamPoint pt) const {
  const RationalBasis rb = patch_.basis(pt);
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (const auto& grid : grids_) {
    for (std::size_t c = 0; c < rb.indices.size(); ++c) {
      g.x() += rb.d_xi[c] * grid[rb.indices[c]];
      g.y() += rb.d_eta[c] * grid[rb.indices[c]];
    }
  }
  return g;
}

std::vector<double> ThicknessField::interfaces(const RationalBasis& rb) const {
  const int n = lamina_count();
  std::vector<double> t(n);
  double h = 0.0;
  for (int k = 0; k < n; ++k) {
    t[k] = lamina_thickness(rb, k);
    if (!(t[k] > 0.0)) {
      std::ostringstream os;
      os << "non-positive thickness " << t[k] << " of lamina " << k;
      throw GeometryError(os.str());
    }
    h += t[k];
  }
  std::vector<double> z(n + 1);
  z[0] = -0.5 * h;
  for (int k = 0; k < n; ++k) z[k + 1] = z[k] + t[k];
  z[n] = 0.5 * h;
  return z;
}

std::vector<double> ThicknessField::interfaces(ParamPoint pt) const {
  return interfaces(patch_.basis(pt));
}

double ThicknessField::volume() const {
  const int p = patch_.xi().degree();
  const int q = patch_.eta().degree();
  const GaussRule gx = gauss_legendre(p + 2);
  const GaussRule gy = gauss_legendre(q + 2);
  const auto kx = patch_.xi().knots();
  const auto ky = patch_.eta().knots();
  double v = 0.0;
  for (int sy : patch_.eta().element_spans()) {
    for (int sx : patch_.xi().element_spans()) {
      const double hx = 0.5 * (kx[sx + 1] - kx[sx]);
      const double hy = 0.5 * (ky[sy + 1] - ky[sy]);
      for (std::size_t b = 0; b < gy.points.size(); ++b) {
        for (std::size_t a = 0; a < gx.points.size(); ++a) {
          const ParamPoint pt{kx[sx] + hx * (gx.points[a] + 1.0),
                              ky[sy] + hy * (gy.points[b] + 1.0)};
          const double det = patch_.point(pt).det;
          v += total(pt) * det * gx.weights[a] * gy.weights[b] * hx * hy;
        }
      }
    }
  }
  return v;
}

ThicknessField fit_field(const Patch2D& patch, const LaminaThicknessFunction& analytic,
                         int n_laminae) {
  if (n_laminae < 1) throw FittingError("need at least one lamina");
  const int n = patch.count_xi();
  const int m = patch.count_eta();
  const auto gx = patch.xi().greville();
  const auto gy = patch.eta().greville();

  // Collocation matrices of the 1-D bases at the Greville abscissae.
  auto collocation = [](const KnotVector& kv, const std::vector<double>& pts) {
    const int size = kv.size();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(size, size);
    for (int r = 0; r < size; ++r) {
      const BasisValues bv = kv.eval(pts[r]);
      for (int a = 0; a <= kv.degree(); ++a) c(r, bv.first(kv.degree()) + a) = bv.values[a];
    }
    return c;
  };
  const Eigen::MatrixXd cx = collocation(patch.xi(), gx);
  const Eigen::MatrixXd cy = collocation(patch.eta(), gy);
  const Eigen::FullPivLU<Eigen::MatrixXd> lux(cx);
  const Eigen::FullPivLU<Eigen::MatrixXd> luy(cy);
  if (!lux.isInvertible() || !luy.isInvertible())
    throw FittingError("singular Greville collocation system");

  // The rational basis reduces to the tensor product only for uniform weights;
  // otherwise collocate the weighted field and divide back out.
  const auto w = patch.weights();
  const bool uniform =
      std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });

  std::vector<std::vector<double>> grids(n_laminae, std::vector<double>(n * m));
  for (int k = 0; k < n_laminae; ++k) {
    Eigen::MatrixXd f(n, m);
    Eigen::MatrixXd den(n, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) {
        const ParamPoint pt{gx[i], gy[j]};
        const SurfacePoint sp = patch.point(pt);
        const double h = analytic(sp.position.x, sp.position.y, k);
        if (!(h > 0.0)) throw FittingError("analytic thickness is not positive over the plate");
        f(i, j) = h;
        if (!uniform) {
          // Denominator of the rational basis at this point.
          const int p = patch.xi().degree();
          const int q = patch.eta().degree();
          const BasisValues bx = patch.xi().eval(pt.xi);
          const BasisValues by = patch.eta().eval(pt.eta);
          double sum = 0.0;
          for (int b = 0; b <= q; ++b)
            for (int a = 0; a <= p; ++a)
              sum += bx.values[a] * by.values[b] * w[patch.index(bx.first(p) + a, by.first(q) + b)];
          den(i, j) = sum;
        }
      }
    }
    // Solve cx * C * cy^T = F for C (weighted coefficients w_c h_c when non-uniform).
    Eigen::MatrixXd rhs = uniform ? f : Eigen::MatrixXd(f.cwiseProduct(den));
    Eigen::MatrixXd tmp = lux.solve(rhs);
    Eigen::MatrixXd coeff = luy.solve(tmp.transpose()).transpose();
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) {
        double c = coeff(i, j);
        if (!uniform) c /= w[patch.index(i, j)];
        grids[k][patch.index(i, j)] = c;
      }
    }
  }
  return ThicknessField(patch, std::move(grids));
}

ThicknessField fit_equal_plies(const Patch2D& patch, const ThicknessFunction& total,
                               int n_laminae) {
  if (n_laminae < 1) throw FittingError("need at least one lamina");
  return fit_field(
      patch, [&](double x, double y, int) { return total(x, y) / n_laminae; }, n_laminae);
}

namespace {

void require_positive(double a, double h_bar) {
  if (!(a > 0.0)) throw ParameterError("plate side a must be positive");
  if (!(h_bar > 0.0)) throw ParameterError("uniform thickness h_bar must be positive");
}

}  // namespace

ThicknessFunction tapered_x(double a, double h_bar, double alpha) {
  require_positive(a, h_bar);
  if (!(h_bar - std::abs(alpha) * a > 0.0)) {
    std::ostringstream os;
    os << "tapered_x: minimum thickness h_bar - alpha a = " << h_bar - std::abs(alpha) * a
       << " is not positive";
    throw ParameterError(os.str());
  }
  return [=](double x, double) { return h_bar - 2.0 * alpha * x; };
}

ThicknessFunction tapered_diagonal(double a, double h_bar, double alpha) {
  require_positive(a, h_bar);
  const double s = std::numbers::sqrt2 * alpha;
  if (!(h_bar - std::abs(s) * a > 0.0)) {
    std::ostringstream os;
    os << "tapered_diagonal: minimum thickness h_bar - sqrt(2) alpha a = "
       << h_bar - std::abs(s) * a << " is not positive";
    throw ParameterError(os.str());
  }
  return [=](double x, double y) { return h_bar - s * x + s * y; };
}

ThicknessFunction sine_wave(double a, double h_bar, double alpha, int n, double x0) {
  require_positive(a, h_bar);
  if (n < 1) throw ParameterError("sine_wave: wavelength count n must be a positive integer");
  if (!(std::abs(alpha) < 0.5))
    throw ParameterError("sine_wave: |alpha| must be below 0.5 for positive thickness");
  const double k = 2.0 * std::numbers::pi * n / a;
  return [=](double x, double) { return h_bar * (1.0 + 2.0 * alpha * std::cos(k * (x - x0))); };
}

double sampled_minimum(const ThicknessFunction& h, double a, int samples) {
  double lo = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const double x = -0.5 * a + a * i / (samples - 1);
      const double y = -0.5 * a + a * j / (samples - 1);
      lo = std::min(lo, h(x, y));
    }
  }
  return lo;
}

}  // namespace vtplate
