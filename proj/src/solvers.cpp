#include "vtplate/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "vtplate/error.hpp"

namespace vtplate {

SymmetricFactorization::SymmetricFactorization(const SparseMatrix& k, bool require_positive) {
  if (k.rows() != k.cols()) throw FactorizationError("matrix is not square", -1, 0.0);
  ldlt_.compute(k);
  if (ldlt_.info() != Eigen::Success)
    throw FactorizationError("sparse LDL^T factorization failed", -1, 0.0);
  const Eigen::VectorXd d = ldlt_.vectorD();
  const double scale = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const bool tiny = std::abs(d[i]) <= 1e-14 * scale || !std::isfinite(d[i]);
    if (tiny || (require_positive && d[i] <= 0.0)) {
      std::ostringstream os;
      os << (tiny ? "singular" : "indefinite") << " matrix: pivot " << i << " = " << d[i];
      throw FactorizationError(os.str(), i, d[i]);
    }
    if (d[i] < 0.0) ++negative_;
  }
}

Eigen::VectorXd SymmetricFactorization::solve(const Eigen::VectorXd& f) const {
  return ldlt_.solve(f);
}

Eigen::VectorXd linear_solve(const SparseMatrix& k, const Eigen::VectorXd& f) {
  if (f.size() != k.rows()) throw DomainError("right-hand side size mismatch");
  if (f.isZero(0.0)) return Eigen::VectorXd::Zero(f.size());
  return SymmetricFactorization(k, true).solve(f);
}

BucklingResult linear_buckling(const SparseMatrix& k, const SparseMatrix& kg) {
  if (k.rows() != kg.rows() || k.cols() != kg.cols())
    throw DomainError("stiffness and geometric stiffness sizes differ");
  const Eigen::MatrixXd kd(k);
  const Eigen::MatrixXd gd(kg);
  // Kg phi = mu K phi with K as the SPD metric; lambda = 1 / mu for mu > 0.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(gd, kd);
  if (es.info() != Eigen::Success)
    throw FactorizationError("generalized eigensolve failed (stiffness not SPD?)", -1, 0.0);
  const Eigen::VectorXd& mu = es.eigenvalues();
  const Eigen::Index top = mu.size() - 1;
  const double scale = mu.cwiseAbs().maxCoeff();
  if (mu.size() == 0 || !(mu[top] > 1e-13 * std::max(scale, 1e-300)))
    throw StabilityError("no positive buckling load factor");
  BucklingResult out;
  out.load_factor = 1.0 / mu[top];
  out.mode = es.eigenvectors().col(top);
  Eigen::Index at = 0;
  out.mode.cwiseAbs().maxCoeff(&at);
  out.mode /= out.mode[at];
  return out;
}

namespace {

double ratio_norm(const Eigen::VectorXd& du, const Eigen::VectorXd& u, double floor) {
  return du.norm() / std::max(u.norm(), floor);
}

bool residual_small(const Eigen::VectorXd& r, const Eigen::VectorXd& f, double lambda,
                    const Eigen::VectorXd& load, double tol) {
  const double scale = std::max(std::abs(lambda) * load.norm(), f.norm());
  return scale > 0.0 ? r.norm() <= tol * scale : r.norm() == 0.0;
}

}  // namespace

NewtonResult newton_raphson(const EquilibriumProblem& problem, double lambda,
                            const SolverSettings& settings, Eigen::VectorXd initial) {
  if (!std::isfinite(lambda)) throw DomainError("load factor must be finite");
  const Eigen::VectorXd& load = problem.reference_load();
  Eigen::VectorXd u = std::move(initial);
  if (u.size() != problem.size()) throw DomainError("initial state size mismatch");
  for (int it = 0; it <= settings.max_iterations; ++it) {
    auto [f, k] = problem.linearize(u);
    const Eigen::VectorXd r = f - lambda * load;
    if (residual_small(r, f, lambda, load, settings.residual_tolerance)) return {u, it};
    if (it == settings.max_iterations) break;
    const Eigen::VectorXd du = SymmetricFactorization(k, false).solve(-r);
    u += du;
    if (!u.allFinite()) break;
    if (ratio_norm(du, u, settings.absolute_floor) <= settings.tolerance) return {u, it + 1};
  }
  std::ostringstream os;
  os << "Newton-Raphson did not converge in " << settings.max_iterations
     << " iterations at load factor " << lambda;
  throw ConvergenceError(os.str(), u);
}

EquilibriumPath riks_trace(const EquilibriumProblem& problem, const SolverSettings& settings) {
  if (!(settings.tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
  const Eigen::VectorXd& load = problem.reference_load();
  if (load.isZero(0.0)) throw DomainError("reference load is zero");

  EquilibriumPath path;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(problem.size());
  double lambda = 0.0;

  // Tangent displacement at the start fixes the load weight and the first arc length.
  Eigen::VectorXd ut = SymmetricFactorization(problem.linearize(u).second, false).solve(load);
  double psi2 = settings.load_scale > 0.0 ? settings.load_scale : ut.squaredNorm();
  if (!(psi2 > 0.0)) psi2 = 1.0;

  double ds = settings.initial_arc_length;
  if (!(ds > 0.0)) {
    const double dp = std::abs(problem.probe(ut) - problem.probe(Eigen::VectorXd::Zero(u.size())));
    double dl = (dp > 0.0 && settings.probe_target > 0.0) ? settings.probe_target / dp
                                                          : std::numeric_limits<double>::infinity();
    if (settings.max_initial_load_increment > 0.0) dl = std::min(dl, settings.max_initial_load_increment);
    if (!std::isfinite(dl)) dl = 1.0;
    ds = dl * std::sqrt(ut.squaredNorm() + psi2);
  }
  path.initial_arc_length = ds;
  const double ds_max = settings.max_arc_ratio * ds;
  const double ds_min = settings.min_arc_ratio * ds;

  Eigen::VectorXd du_prev = ut;
  double dl_prev = 1.0;
  int negative = SymmetricFactorization(problem.linearize(u).second, false).negative_pivots();
  int step = 0;

  auto shrink = [&]() {
    ds *= settings.shrink;
    if (ds >= ds_min) return false;
    path.complete = false;
    std::ostringstream os;
    os << "arc length underflow after " << step << " accepted steps at load factor " << lambda;
    path.message = os.str();
    return true;
  };

  while (step < settings.max_steps) {
    // Predictor along the current tangent, oriented by the previous increment.
    const double orient = du_prev.dot(ut) + psi2 * dl_prev;
    const double sign = orient >= 0.0 ? 1.0 : -1.0;
    const double dl_pred = sign * ds / std::sqrt(ut.squaredNorm() + psi2);
    const Eigen::VectorXd du_pred = dl_pred * ut;

    Eigen::VectorXd u_new = u + du_pred;
    double l_new = lambda + dl_pred;
    bool converged = false;
    int iterations = 0;
    try {
      for (int it = 0; it <= settings.max_iterations; ++it) {
        auto [f, k] = problem.linearize(u_new);
        const Eigen::VectorXd r = f - l_new * load;
        if (residual_small(r, f, l_new, load, settings.residual_tolerance)) {
          converged = true;
          break;
        }
        if (it == settings.max_iterations) break;
        const SymmetricFactorization fac(k, false);
        const Eigen::VectorXd du_r = fac.solve(-r);
        const Eigen::VectorXd du_f = fac.solve(load);
        // Corrections stay orthogonal to the predictor in (u, lambda) space.
        const double denom = du_pred.dot(du_f) + psi2 * dl_pred;
        if (denom == 0.0 || !std::isfinite(denom)) break;
        const double dl = -du_pred.dot(du_r) / denom;
        const Eigen::VectorXd du = du_r + dl * du_f;
        u_new += du;
        l_new += dl;
        iterations = it + 1;
        if (!u_new.allFinite() || !std::isfinite(l_new)) break;
        if (ratio_norm(du, u_new, settings.absolute_floor) <= settings.tolerance) {
          converged = true;
          break;
        }
      }
    } catch (const FactorizationError&) {
      converged = false;
    }

    Eigen::VectorXd ut_new;
    int negative_new = negative;
    if (converged) {
      try {
        const SymmetricFactorization fac(problem.linearize(u_new).second, false);
        ut_new = fac.solve(load);
        negative_new = fac.negative_pivots();
      } catch (const FactorizationError&) {
        converged = false;
      }
    }
    if (converged && settings.reject_bifurcation_jumps && negative_new > negative) {
      // Losing stability without the load reversing means the step skipped over a
      // bifurcation onto an unstable branch; a limit point flips the orientation.
      const Eigen::VectorXd du_step = u_new - u;
      if (du_step.dot(ut_new) + psi2 * (l_new - lambda) > 0.0) converged = false;
    }

    if (!converged) {
      if (shrink()) return path;
      continue;
    }

    du_prev = u_new - u;
    dl_prev = l_new - lambda;
    u = std::move(u_new);
    lambda = l_new;
    ut = std::move(ut_new);
    negative = negative_new;
    ++step;
    path.records.push_back({step, lambda, u, problem.probe(u), iterations});

    if (iterations <= settings.fast_iterations) ds = std::min(ds * settings.growth, ds_max);
    if (std::abs(lambda) >= settings.max_load) {
      path.message = "load limit reached";
      return path;
    }
    if (std::abs(path.records.back().probe) >= settings.max_probe) {
      path.message = "deflection limit reached";
      return path;
    }
  }
  path.complete = false;
  path.message = "step limit reached before the load or deflection limit";
  return path;
}

double critical_load_threshold(const EquilibriumPath& path, double threshold) {
  double l0 = 0.0, p0 = 0.0;
  for (const PathRecord& rec : path.records) {
    const double p1 = std::abs(rec.probe);
    if (p1 >= threshold) {
      if (p1 == p0) return rec.lambda;
      return l0 + (threshold - p0) / (p1 - p0) * (rec.lambda - l0);
    }
    l0 = rec.lambda;
    p0 = p1;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double critical_load_plateau(const EquilibriumPath& path) {
  double best = std::numeric_limits<double>::infinity();
  double value = std::numeric_limits<double>::quiet_NaN();
  double l0 = 0.0, p0 = 0.0;
  for (const PathRecord& rec : path.records) {
    const double p1 = std::abs(rec.probe);
    const double dp = p1 - p0;
    if (dp > 0.0) {
      const double slope = std::abs(rec.lambda - l0) / dp;
      if (slope < best) {
        best = slope;
        value = 0.5 * (rec.lambda + l0);
      }
    }
    l0 = rec.lambda;
    p0 = p1;
  }
  return value;
}

}  // namespace vtplate
