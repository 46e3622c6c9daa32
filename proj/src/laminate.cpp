#include "vtplate/laminate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vtplate/error.hpp"

namespace vtplate {

namespace {

// cos/sin of an angle in degrees, exact at multiples of 90.
std::pair<double, double> cos_sin_deg(double deg) {
  const double quarter = deg / 90.0;
  if (quarter == std::round(quarter)) {
    const long k = ((static_cast<long>(std::round(quarter)) % 4) + 4) % 4;
    constexpr double c[] = {1.0, 0.0, -1.0, 0.0};
    constexpr double s[] = {0.0, 1.0, 0.0, -1.0};
    return {c[k], s[k]};
  }
  const double rad = deg * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

}  // namespace

LaminaMaterial LaminaMaterial::isotropic(double e, double nu) {
  const double g = e / (2.0 * (1.0 + nu));
  return LaminaMaterial{e, e, g, g, g, nu};
}

LaminaMaterial LaminaMaterial::from_ratios(double e2, double e1_e2, double g12_e2,
                                           double g23_e2, double g13_e2, double nu12) {
  return LaminaMaterial{e1_e2 * e2, e2, g12_e2 * e2, g23_e2 * e2, g13_e2 * e2, nu12};
}

void LaminaMaterial::validate() const {
  if (!(e1 > 0 && e2 > 0 && g12 > 0 && g23 > 0 && g13 > 0))
    throw MaterialError("lamina moduli must be positive");
  if (!(nu12 > 0.0 && nu12 < 0.5)) throw MaterialError("nu12 must lie in (0, 0.5)");
  if (!(nu12 * nu12 * e2 / e1 < 1.0))
    throw MaterialError("plane-stress stiffness is not positive definite (nu12^2 E2/E1 >= 1)");
}

LaminaStiffness reduced_stiffness(const LaminaMaterial& mat) {
  mat.validate();
  const double nu21 = mat.nu21();
  const double den = 1.0 - mat.nu12 * nu21;
  LaminaStiffness s;
  s.q.setZero();
  s.q(0, 0) = mat.e1 / den;
  s.q(1, 1) = mat.e2 / den;
  s.q(0, 1) = s.q(1, 0) = mat.nu12 * mat.e2 / den;
  s.q(2, 2) = mat.g12;
  s.qs.setZero();
  s.qs(0, 0) = mat.g23;
  s.qs(1, 1) = mat.g13;
  return s;
}

LaminaStiffness transform_stiffness(const LaminaStiffness& s, double theta_deg) {
  const auto [m, n] = cos_sin_deg(theta_deg);
  // Engineering-strain rotation, plate axes -> material axes.
  Eigen::Matrix3d te;
  te << m * m, n * n, m * n,
        n * n, m * m, -m * n,
        -2.0 * m * n, 2.0 * m * n, m * m - n * n;
  // (gamma_23, gamma_13) from (gamma_yz, gamma_xz).
  Eigen::Matrix2d ts;
  ts << m, -n,
        n, m;
  LaminaStiffness out;
  out.q = te.transpose() * s.q * te;
  out.qs = ts.transpose() * s.qs * ts;
  return out;
}

Layup::Layup(std::vector<Ply> plies) : plies_(std::move(plies)) {
  if (plies_.empty()) throw MaterialError("layup needs at least one ply");
  rotated_.reserve(plies_.size());
  for (const Ply& p : plies_)
    rotated_.push_back(transform_stiffness(reduced_stiffness(p.material), p.angle_deg));
}

Layup::Layup(const LaminaMaterial& mat, std::span<const double> angles_deg)
    : Layup([&] {
        std::vector<Ply> plies;
        for (double a : angles_deg) plies.push_back({a, mat});
        return plies;
      }()) {}

bool Layup::is_symmetric() const {
  const int n = size();
  for (int k = 0; k < n / 2; ++k) {
    if (plies_[k].angle_deg != plies_[n - 1 - k].angle_deg) return false;
  }
  return true;
}

Eigen::Matrix<double, 6, 6> SectionStiffness::abd() const {
  Eigen::Matrix<double, 6, 6> m;
  m << a, b, b, d;
  return m;
}

SectionStiffness section_stiffness(const Layup& layup, std::span<const double> interfaces,
                                   double shear_correction) {
  const int n = layup.size();
  if (static_cast<int>(interfaces.size()) != n + 1) {
    std::ostringstream os;
    os << "expected " << n + 1 << " interface coordinates, got " << interfaces.size();
    throw GeometryError(os.str());
  }
  SectionStiffness s;
  for (int k = 0; k < n; ++k) {
    const double z0 = interfaces[k];
    const double z1 = interfaces[k + 1];
    if (!(z1 > z0)) throw GeometryError("interface coordinates must be strictly increasing");
    const LaminaStiffness& qk = layup.global_stiffness(k);
    s.a += qk.q * (z1 - z0);
    s.b += qk.q * (0.5 * (z1 * z1 - z0 * z0));
    s.d += qk.q * ((z1 * z1 * z1 - z0 * z0 * z0) / 3.0);
    s.as += qk.qs * (z1 - z0);
  }
  s.as *= shear_correction;
  return s;
}

Resultants resultants(const SectionStiffness& s, const Eigen::Vector3d& eps,
                      const Eigen::Vector3d& kappa, const Eigen::Vector2d& gamma) {
  Resultants r;
  r.n = s.a * eps + s.b * kappa;
  r.m = s.b * eps + s.d * kappa;
  r.q = s.as * gamma;
  return r;
}

}  // namespace vtplate
