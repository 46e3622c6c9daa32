#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "support.hpp"
#include "vtplate/assembly.hpp"
#include "vtplate/error.hpp"
#include "vtplate/solvers.hpp"

using namespace vtplate;
using doctest::Approx;
using testing::isotropic_plate;
using testing::random_vector;

namespace {

// Control coefficients reproducing f(x, y) for dof d (isoparametric reproduction of linear fields).
void set_field(const PlateModel& m, Eigen::VectorXd& state, Dof d, double cx, double cy, double c0) {
  const auto ctrl = m.patch().control();
  for (int c = 0; c < m.node_count(); ++c) state[PlateModel::dof(c, d)] = c0 + cx * ctrl[c].x + cy * ctrl[c].y;
}

std::vector<double> linear_imperfection(const PlateModel& m, double bx, double by) {
  std::vector<double> w(static_cast<std::size_t>(m.node_count()));
  const auto ctrl = m.patch().control();
  for (int c = 0; c < m.node_count(); ++c) w[c] = bx * ctrl[c].x + by * ctrl[c].y;
  return w;
}

PlateModel laminated_plate(int elems, double alpha) {
  const double a = 10.0;
  Patch2D patch = testing::square(a, elems);
  auto field = fit_equal_plies(patch, tapered_diagonal(a, 0.2, alpha), 3);
  const double angles[] = {30.0, -45.0, 10.0};
  return PlateModel(patch, field, Layup(LaminaMaterial::from_ratios(1.0, 25.0, 0.5, 0.2, 0.5, 0.25), angles));
}

std::vector<double> random_imperfection(const PlateModel& m, double scale, unsigned seed) {
  const Eigen::VectorXd r = random_vector(m.node_count(), scale, seed);
  return std::vector<double>(r.data(), r.data() + r.size());
}

}  // namespace

TEST_CASE("strain operators: linear membrane field") {
  PlateModel m = isotropic_plate(10.0, 0.2, 3);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(m.dof_count());
  set_field(m, s, Dof::u, 2e-3, 0.0, 0.1);
  for (ParamPoint pt : {ParamPoint{0.1, 0.2}, ParamPoint{0.5, 0.5}, ParamPoint{0.93, 0.41}}) {
    const StrainOperators op = strain_operators(m, s, pt);
    CHECK(op.strains.eps[0] == Approx(2e-3).epsilon(1e-12));
    CHECK(std::abs(op.strains.eps[1]) < 1e-15);
    CHECK(std::abs(op.strains.eps[2]) < 1e-15);
    CHECK(op.strains.kappa.norm() < 1e-15);
    CHECK(op.strains.gamma.norm() < 1e-15);
  }
}

TEST_CASE("strain operators: von Karman ramp and shear cancellation") {
  PlateOptions opt;
  opt.imperfection_shear = ImperfectionShear::included;
  PlateModel m = isotropic_plate(10.0, 0.2, 3, 3e6, 0.25, opt);
  const double c = 0.03;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(m.dof_count());
  set_field(m, s, Dof::w, c, 0.0, 0.0);
  const StrainOperators ramp = strain_operators(m, s, {0.3, 0.6});
  CHECK(ramp.strains.eps[0] == Approx(0.5 * c * c).epsilon(1e-12));

  // phi_x + w_x + w_bar_x = 0 with a sloped imperfection.
  const double beta = 0.002, phi = 0.01;
  m.set_imperfection(linear_imperfection(m, beta, 0.0));
  s.setZero();
  for (int n = 0; n < m.node_count(); ++n) s[PlateModel::dof(n, Dof::phi_x)] = phi;
  set_field(m, s, Dof::w, -(phi + beta), 0.0, 0.0);
  const StrainOperators g = strain_operators(m, s, {0.7, 0.2});
  CHECK(std::abs(g.strains.gamma[1]) < 1e-15);
  CHECK(std::abs(g.strains.gamma[0]) < 1e-15);

  PlateModel free = isotropic_plate(10.0, 0.2, 3);
  free.set_imperfection(linear_imperfection(free, beta, 0.0));
  const StrainOperators f = strain_operators(free, s, {0.7, 0.2});
  CHECK(f.strains.gamma[1] == Approx(-beta).epsilon(1e-12));
  // Membrane strain carries the bilinear w * w_bar term in both variants.
  CHECK(f.strains.eps[0] == Approx(0.5 * (phi + beta) * (phi + beta) - (phi + beta) * beta).epsilon(1e-12));
}

TEST_CASE("strain operators agree with a direct evaluation of the strain definitions") {
  PlateModel m = laminated_plate(3, 0.005);
  m.set_imperfection(random_imperfection(m, 0.01, 3));
  const Eigen::VectorXd s = random_vector(m.dof_count(), 0.01, 4);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const ParamPoint pt{u(rng), u(rng)};
    const RationalBasis rb = m.patch().basis(pt);
    const Eigen::Matrix2d jit = m.patch().point(pt).jacobian.inverse().transpose();
    double d[5][2] = {}, f[5] = {}, wb[2] = {};
    for (std::size_t k = 0; k < rb.indices.size(); ++k) {
      const Eigen::Vector2d g = jit * Eigen::Vector2d(rb.d_xi[k], rb.d_eta[k]);
      for (int q = 0; q < 5; ++q) {
        const double v = s[PlateModel::dof(rb.indices[k], static_cast<Dof>(q))];
        d[q][0] += g.x() * v;
        d[q][1] += g.y() * v;
        f[q] += rb.values[k] * v;
      }
      wb[0] += g.x() * m.imperfection()[rb.indices[k]];
      wb[1] += g.y() * m.imperfection()[rb.indices[k]];
    }
    const double ux = d[0][0], uy = d[0][1], vx = d[1][0], vy = d[1][1], wx = d[2][0], wy = d[2][1];
    const StrainOperators op = strain_operators(m, s, pt);
    CHECK(op.strains.eps[0] == Approx(ux + 0.5 * wx * wx + wx * wb[0]).epsilon(1e-12));
    CHECK(op.strains.eps[1] == Approx(vy + 0.5 * wy * wy + wy * wb[1]).epsilon(1e-12));
    CHECK(op.strains.eps[2] == Approx(uy + vx + wx * wy + wb[0] * wy + wx * wb[1]).epsilon(1e-12));
    CHECK(op.strains.kappa[0] == Approx(d[3][0]).epsilon(1e-12));
    CHECK(op.strains.kappa[1] == Approx(d[4][1]).epsilon(1e-12));
    CHECK(op.strains.kappa[2] == Approx(d[3][1] + d[4][0]).epsilon(1e-12));
    CHECK(op.strains.gamma[0] == Approx(f[4] + wy).epsilon(1e-12));
    CHECK(op.strains.gamma[1] == Approx(f[3] + wx).epsilon(1e-12));

    // Linear kinematics drop every quadratic and imperfection term.
    const StrainOperators lin = strain_operators(m, s, pt, Kinematics::linear);
    CHECK(lin.strains.eps[0] == Approx(ux).epsilon(1e-12));
    CHECK(lin.strains.eps[2] == Approx(uy + vx).epsilon(1e-12));
  }
}

TEST_CASE("zero state and rigid translation give zero internal force") {
  PlateModel m = laminated_plate(3, 0.01);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(m.dof_count());
  CHECK(internal_force(m, s).norm() == 0.0);
  set_field(m, s, Dof::u, 0.0, 0.0, 0.3);
  set_field(m, s, Dof::v, 0.0, 0.0, -0.2);
  set_field(m, s, Dof::w, 0.0, 0.0, 0.05);
  m.set_imperfection(random_imperfection(m, 0.01, 8));
  const AssembledSystem sys = assemble(m, s);
  const double scale = sys.tangent.norm() * s.norm();
  CHECK(sys.internal_force.norm() < 1e-12 * scale);
}

TEST_CASE("internal force is the gradient of the strain energy") {
  for (ImperfectionShear mode : {ImperfectionShear::stress_free, ImperfectionShear::included}) {
    const double a = 10.0;
    Patch2D patch = testing::square(a, 2);
    auto field = fit_equal_plies(patch, tapered_x(a, 0.2, 0.005), 2);
    const double angles[] = {0.0, 90.0};
    PlateOptions opt;
    opt.imperfection_shear = mode;
    PlateModel m(patch, field, Layup(LaminaMaterial::from_ratios(1.0, 25.0, 0.5, 0.2, 0.5, 0.25), angles), opt);
    m.set_imperfection(random_imperfection(m, 0.02, 10));
    for (unsigned seed = 0; seed < 5; ++seed) {
      const Eigen::VectorXd s = random_vector(m.dof_count(), 0.02, 100 + seed);
      const Eigen::VectorXd dir = random_vector(m.dof_count(), 1.0, 200 + seed);
      const double h = 1e-6;
      const double fd = (strain_energy(m, s + h * dir) - strain_energy(m, s - h * dir)) / (2 * h);
      const double an = internal_force(m, s).dot(dir);
      CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
    }
  }
}

TEST_CASE("tangent is the Jacobian of the internal force") {
  PlateModel m = laminated_plate(2, 0.01);
  m.set_imperfection(random_imperfection(m, 0.02, 12));
  for (unsigned seed = 0; seed < 3; ++seed) {
    const Eigen::VectorXd s = random_vector(m.dof_count(), 0.02, 300 + seed);
    const Eigen::MatrixXd k = Eigen::MatrixXd(assemble(m, s).tangent);
    CHECK((k - k.transpose()).norm() < 1e-10 * k.norm());
    const double h = 1e-6 * s.norm() + 1e-8;
    double worst = 0.0;
    for (int j = 0; j < m.dof_count(); ++j) {
      Eigen::VectorXd sp = s, sm = s;
      sp[j] += h;
      sm[j] -= h;
      const Eigen::VectorXd col = (internal_force(m, sp) - internal_force(m, sm)) / (2 * h);
      worst = std::max(worst, (col - k.col(j)).norm() / k.col(j).norm());
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("tangent at the undeformed perfect state is the linear stiffness") {
  PlateModel m = laminated_plate(3, 0.01);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m.dof_count());
  const Eigen::MatrixXd kt(assemble(m, zero).tangent);
  const Eigen::MatrixXd kl(assemble(m, zero, Kinematics::linear).tangent);
  CHECK((kt - kl).norm() <= 1e-14 * kl.norm());
}

TEST_CASE("geometric stiffness is the prestress part of the tangent") {
  PlateModel m = laminated_plate(3, 0.01);
  Eigen::VectorXd s = random_vector(m.dof_count(), 1e-3, 17);
  for (int n = 0; n < m.node_count(); ++n)
    for (Dof d : {Dof::w, Dof::phi_x, Dof::phi_y}) s[PlateModel::dof(n, d)] = 0.0;
  const Eigen::MatrixXd kt(assemble(m, s).tangent);
  const Eigen::MatrixXd kl(assemble(m, s, Kinematics::linear).tangent);
  const Eigen::MatrixXd kg(geometric_stiffness(m, s));
  CHECK((kt - kl - kg).norm() <= 1e-10 * kg.norm());
  CHECK(kg.norm() > 0.0);
  for (int i = 0; i < m.dof_count(); ++i)
    if (i % kDofsPerNode != static_cast<int>(Dof::w)) CHECK(kg.row(i).norm() == 0.0);
}

TEST_CASE("parallel assembly matches the serial reference") {
  PlateModel m = laminated_plate(6, 0.01);
  m.set_imperfection(random_imperfection(m, 0.01, 30));
  const Eigen::VectorXd s = random_vector(m.dof_count(), 0.01, 31);
  const AssembledSystem p = assemble(m, s);
  const AssembledSystem q = assemble_serial(m, s);
  CHECK((p.internal_force - q.internal_force).norm() == 0.0);
  CHECK(Eigen::MatrixXd(p.tangent - q.tangent).norm() == 0.0);
  double e = 0.0;
  for (int el = 0; el < static_cast<int>(m.elements().size()); ++el) e += element_energy(m, s, el);
  CHECK(strain_energy(m, s) == Approx(e).epsilon(1e-12));
}

TEST_CASE("single element assembly is the element matrix") {
  PlateModel m = laminated_plate(1, 0.0);
  m.set_imperfection(random_imperfection(m, 0.01, 41));
  const Eigen::VectorXd s = random_vector(m.dof_count(), 0.01, 42);
  const Eigen::MatrixXd ke = element_tangent(m, s, 0);
  const Eigen::VectorXd fe = element_internal_force(m, s, 0);
  const auto& nodes = m.elements()[0].nodes;
  const AssembledSystem sys = assemble(m, s);
  const Eigen::MatrixXd kg(sys.tangent);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (int da = 0; da < kDofsPerNode; ++da) {
      const int ra = static_cast<int>(a) * kDofsPerNode + da;
      CHECK(sys.internal_force[nodes[a] * kDofsPerNode + da] == Approx(fe[ra]).epsilon(1e-14));
      for (std::size_t b = 0; b < nodes.size(); ++b)
        for (int db = 0; db < kDofsPerNode; ++db)
          CHECK(kg(nodes[a] * kDofsPerNode + da, nodes[b] * kDofsPerNode + db) ==
                Approx(ke(ra, static_cast<int>(b) * kDofsPerNode + db)).epsilon(1e-14));
    }
  }
}

TEST_CASE("mirror symmetry of the stiffness") {
  PlateModel m = isotropic_plate(10.0, 0.2, 4);
  const Eigen::MatrixXd k(assemble(m, Eigen::VectorXd::Zero(m.dof_count())).tangent);
  const int n = m.patch().count_xi();
  // x -> -x maps node (i, j) to (n-1-i, j) and flips u and phi_x.
  const int dofs = m.dof_count();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dofs, dofs);
  for (int j = 0; j < m.patch().count_eta(); ++j) {
    for (int i = 0; i < n; ++i) {
      const int from = m.patch().index(i, j), to = m.patch().index(n - 1 - i, j);
      for (int d = 0; d < kDofsPerNode; ++d) {
        const double sign = (d == 0 || d == 3) ? -1.0 : 1.0;
        p(PlateModel::dof(to, static_cast<Dof>(d)), PlateModel::dof(from, static_cast<Dof>(d))) = sign;
      }
    }
  }
  CHECK((p * k * p.transpose() - k).norm() < 1e-12 * k.norm());
}

TEST_CASE("clamped stiffness is positive definite") {
  PlateModel m = laminated_plate(3, 0.01);
  const Edge all[] = {Edge::AD, Edge::BC, Edge::AB, Edge::CD};
  m.apply_bc(Support::clamped, all);
  const PlateEquilibrium pe(m, LoadCase{1.0, 0.0, 0.0});
  const SparseMatrix k = pe.reduce(assemble(m, Eigen::VectorXd::Zero(m.dof_count())).tangent);
  CHECK_NOTHROW(SymmetricFactorization(k, true));
  CHECK(SymmetricFactorization(k, false).negative_pivots() == 0);
}

TEST_CASE("load vectors") {
  PlateModel unit(Patch2D::rectangle(0.0, 1.0, 0.0, 1.0, 3, 3, 2),
                  fit_equal_plies(Patch2D::rectangle(0.0, 1.0, 0.0, 1.0, 3, 3, 2), [](double, double) { return 0.01; }, 1),
                  Layup(std::vector<Ply>{Ply{0.0, LaminaMaterial::isotropic(1.0, 0.3)}}));
  const Eigen::VectorXd fq = load_vector(unit, LoadCase{1.0, 0.0, 0.0});
  double wsum = 0.0, other = 0.0;
  for (int i = 0; i < fq.size(); ++i) (i % kDofsPerNode == 2 ? wsum : other) += fq[i];
  CHECK(wsum == Approx(1.0).epsilon(1e-13));
  CHECK(other == 0.0);

  PlateModel m = isotropic_plate(10.0, 0.2, 4);
  const double nx = 3.0;
  const Eigen::VectorXd fx = load_vector(m, LoadCase{0.0, nx, 0.0});
  double left = 0.0, right = 0.0, total = 0.0, vsum = 0.0;
  for (int c : m.edge_nodes(Edge::AD)) left += fx[PlateModel::dof(c, Dof::u)];
  for (int c : m.edge_nodes(Edge::BC)) right += fx[PlateModel::dof(c, Dof::u)];
  for (int c = 0; c < m.node_count(); ++c) {
    total += fx[PlateModel::dof(c, Dof::u)];
    vsum += std::abs(fx[PlateModel::dof(c, Dof::v)]);
  }
  CHECK(left == Approx(nx * 10.0));  // compression pushes edge AD towards +x
  CHECK(right == Approx(-nx * 10.0));
  CHECK(std::abs(total) < 1e-12);
  CHECK(vsum < 1e-12 * std::abs(left));
  const Eigen::VectorXd fy = load_vector(m, LoadCase{0.0, 0.0, nx});
  const Eigen::VectorXd fb = load_vector(m, LoadCase{0.0, nx, nx});
  CHECK((fb - fx - fy).norm() < 1e-14 * fb.norm());
}

TEST_CASE("boundary condition counts") {
  PlateModel m = isotropic_plate(10.0, 0.2, 6);
  const Edge ad[] = {Edge::AD};
  m.apply_bc(Support::clamped, ad);
  CHECK(m.constrained_count() == 40);

  m.clear_constraints();
  const Edge all[] = {Edge::AD, Edge::BC, Edge::AB, Edge::CD};
  m.apply_bc(Support::ss1, all);
  CHECK(m.constrained_count() == 28 + 16 + 16);
  for (int c : m.edge_nodes(Edge::AD)) {
    CHECK(m.constrained()[PlateModel::dof(c, Dof::w)]);
    CHECK(m.constrained()[PlateModel::dof(c, Dof::phi_y)]);
    CHECK_FALSE(m.constrained()[PlateModel::dof(c, Dof::u)]);
    CHECK_FALSE(m.constrained()[PlateModel::dof(c, Dof::v)]);
  }
  for (int c : m.edge_nodes(Edge::AB)) CHECK(m.constrained()[PlateModel::dof(c, Dof::phi_x)]);

  m.clear_constraints();
  const Edge two[] = {Edge::AD, Edge::CD};
  m.apply_bc(Support::ss2, two);
  CHECK(m.constrained_count() == 3 * 15);
  const int corner_b = m.patch().index(7, 7);
  for (int d = 0; d < kDofsPerNode; ++d) CHECK_FALSE(m.constrained()[PlateModel::dof(corner_b, static_cast<Dof>(d))]);
}

TEST_CASE("imperfection seeding") {
  PlateModel m = isotropic_plate(10.0, 0.2, 3);
  Eigen::VectorXd mode = random_vector(m.dof_count(), 1.0, 50);
  seed_imperfection(m, mode, 0.0, 10.0);
  for (double v : m.imperfection()) CHECK(v == 0.0);
  seed_imperfection(m, mode, 1e-5, 10.0);
  double peak = 0.0;
  for (double v : m.imperfection()) peak = std::max(peak, std::abs(v));
  CHECK(peak == Approx(1e-4).epsilon(1e-14));
  const std::vector<double> first = m.imperfection();
  seed_imperfection(m, 3.7 * mode, 1e-5, 10.0);
  for (std::size_t c = 0; c < first.size(); ++c) CHECK(m.imperfection()[c] == Approx(first[c]).epsilon(1e-14));
  Eigen::VectorXd flat = mode;
  for (int c = 0; c < m.node_count(); ++c) flat[PlateModel::dof(c, Dof::w)] = 0.0;
  CHECK_THROWS_AS(seed_imperfection(m, flat, 1e-5, 10.0), DomainError);
}

TEST_CASE("patch test on a distorted parameterization") {
  const double a = 4.0;
  Patch2D base = Patch2D::rectangle(0.0, a, 0.0, a, 4, 4, 2);
  std::vector<Point2> ctrl(base.control().begin(), base.control().end());
  std::mt19937 rng(60);
  std::uniform_real_distribution<double> u(-0.12, 0.12);
  for (int j = 1; j + 1 < base.count_eta(); ++j)
    for (int i = 1; i + 1 < base.count_xi(); ++i) {
      ctrl[base.index(i, j)].x += u(rng);
      ctrl[base.index(i, j)].y += u(rng);
    }
  Patch2D patch(base.xi(), base.eta(), ctrl, {});
  const double angles[] = {0.0, 45.0};
  PlateModel m(patch, fit_equal_plies(patch, [](double, double) { return 0.1; }, 2),
               Layup(LaminaMaterial::from_ratios(1.0, 25.0, 0.5, 0.2, 0.5, 0.25), angles));
  Eigen::VectorXd s = Eigen::VectorXd::Zero(m.dof_count());
  set_field(m, s, Dof::u, 1e-3, 2e-4, 0.0);
  set_field(m, s, Dof::v, -3e-4, 5e-4, 0.0);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const StrainOperators op = strain_operators(m, s, {up(rng), up(rng)});
    CHECK(op.strains.eps[0] == Approx(1e-3).epsilon(1e-10));
    CHECK(op.strains.eps[1] == Approx(5e-4).epsilon(1e-10));
    CHECK(op.strains.eps[2] == Approx(-1e-4).epsilon(1e-10));
  }
  const Eigen::VectorXd f = internal_force(m, s);
  double interior = 0.0;
  for (int j = 1; j + 1 < patch.count_eta(); ++j)
    for (int i = 1; i + 1 < patch.count_xi(); ++i)
      for (int d = 0; d < kDofsPerNode; ++d) interior = std::max(interior, std::abs(f[PlateModel::dof(patch.index(i, j), static_cast<Dof>(d))]));
  CHECK(interior < 1e-10 * f.cwiseAbs().maxCoeff());
}

TEST_CASE("literal imperfection shear leaves the energy symmetric in the total deflection") {
  for (ImperfectionShear mode : {ImperfectionShear::included, ImperfectionShear::stress_free}) {
    PlateOptions opt;
    opt.imperfection_shear = mode;
    PlateModel m = isotropic_plate(10.0, 0.2, 3, 3e6, 0.25, opt);
    m.set_imperfection(random_imperfection(m, 0.01, 70));
    const Eigen::VectorXd s = random_vector(m.dof_count(), 0.01, 71);
    // (u, v, w, phi) -> (u, v, -w - 2 w_bar, -phi) maps W = w + w_bar to -W.
    Eigen::VectorXd t = s;
    for (int c = 0; c < m.node_count(); ++c) {
      t[PlateModel::dof(c, Dof::w)] = -s[PlateModel::dof(c, Dof::w)] - 2.0 * m.imperfection()[c];
      t[PlateModel::dof(c, Dof::phi_x)] *= -1.0;
      t[PlateModel::dof(c, Dof::phi_y)] *= -1.0;
    }
    const double e1 = strain_energy(m, s), e2 = strain_energy(m, t);
    if (mode == ImperfectionShear::included) CHECK(e2 == Approx(e1).epsilon(1e-10));
    else CHECK(std::abs(e2 - e1) > 1e-3 * e1);
  }
}

namespace {

// Kirchhoff plate with all edges clamped: 13-point biharmonic finite differences with
// mirrored ghost nodes, Richardson-extrapolated. Returns w_center * D / (q a^4).
double clamped_plate_coefficient() {
  auto solve = [](int n) {
    const double h = 1.0 / n;
    const int m = n - 1;
    auto id = [m](int i, int j) { return (i - 1) + m * (j - 1); };
    std::vector<Eigen::Triplet<double>> trip;
    auto add = [&](int row, int i, int j, double c) {
      if (i == 0 || j == 0 || i == n || j == n) return;
      if (i < 0) i = -i;  // clamped: ghost mirrors the first interior node
      if (j < 0) j = -j;
      if (i > n) i = 2 * n - i;
      if (j > n) j = 2 * n - j;
      trip.emplace_back(row, id(i, j), c);
    };
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        const int r = id(i, j);
        add(r, i, j, 20.0);
        add(r, i - 1, j, -8.0); add(r, i + 1, j, -8.0); add(r, i, j - 1, -8.0); add(r, i, j + 1, -8.0);
        add(r, i - 1, j - 1, 2.0); add(r, i + 1, j - 1, 2.0); add(r, i - 1, j + 1, 2.0); add(r, i + 1, j + 1, 2.0);
        add(r, i - 2, j, 1.0); add(r, i + 2, j, 1.0); add(r, i, j - 2, 1.0); add(r, i, j + 2, 1.0);
      }
    }
    Eigen::SparseMatrix<double> k(m * m, m * m);
    k.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(k);
    const Eigen::VectorXd w = lu.solve(Eigen::VectorXd::Constant(m * m, h * h * h * h));
    return w[id(n / 2, n / 2)];
  };
  const double c1 = solve(48), c2 = solve(96);
  return (4.0 * c2 - c1) / 3.0;
}

}  // namespace

TEST_CASE("reduced shear integration avoids locking in a thin clamped plate") {
  const double oracle = clamped_plate_coefficient();
  CHECK(oracle == Approx(0.00126532).epsilon(1e-3));
  const double a = 10.0, h = 0.2, e = 3e6, nu = 0.25;
  const double d = e * h * h * h / (12.0 * (1.0 - nu * nu));
  auto coefficient = [&](int shear_points) {
    PlateOptions opt;
    opt.shear_points = shear_points;
    PlateModel m = isotropic_plate(a, h, 6, e, nu, opt);
    const Edge all[] = {Edge::AD, Edge::BC, Edge::AB, Edge::CD};
    m.apply_bc(Support::clamped, all);
    const Eigen::VectorXd u = linear_bending(m, LoadCase{1.0, 0.0, 0.0});
    return m.deflection_at(u, {0.0, 0.0}) * d / (a * a * a * a);
  };
  const double reduced = coefficient(0);
  const double full = coefficient(3);
  CHECK(std::abs(reduced - oracle) <= 0.02 * oracle);
  CHECK(full < 0.98 * reduced);
}
