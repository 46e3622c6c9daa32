#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "vtplate/assembly.hpp"
#include "vtplate/plate_model.hpp"

namespace vtplate {

/// Residual R(u, lambda) = f(u) - lambda * F for a fixed reference load F.
class EquilibriumProblem {
 public:
  virtual ~EquilibriumProblem() = default;

  virtual Eigen::Index size() const = 0;
  /// Internal force and tangent at u.
  virtual std::pair<Eigen::VectorXd, SparseMatrix> linearize(const Eigen::VectorXd& u) const = 0;
  virtual Eigen::VectorXd internal_force(const Eigen::VectorXd& u) const {
    return linearize(u).first;
  }
  virtual const Eigen::VectorXd& reference_load() const = 0;
  /// Scalar monitored along the path (a deflection for plates).
  virtual double probe(const Eigen::VectorXd& u) const { return u.size() ? u[0] : 0.0; }
};

/// LDL^T of a symmetric sparse matrix.
class SymmetricFactorization {
 public:
  /// With `require_positive`, any non-positive pivot raises FactorizationError;
  /// otherwise only (near-)zero pivots do.
  SymmetricFactorization(const SparseMatrix& k, bool require_positive);
  Eigen::VectorXd solve(const Eigen::VectorXd& f) const;
  /// Number of negative pivots (inertia).
  int negative_pivots() const { return negative_; }

 private:
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  int negative_ = 0;
};

/// Direct solve of an SPD system.
Eigen::VectorXd linear_solve(const SparseMatrix& k, const Eigen::VectorXd& f);

struct BucklingResult {
  double load_factor = 0.0;
  Eigen::VectorXd mode;  // unit max |entry|, that entry positive
};

/// Smallest positive lambda with K phi = lambda Kg phi. K must be SPD.
BucklingResult linear_buckling(const SparseMatrix& k, const SparseMatrix& kg);

struct SolverSettings {
  double tolerance = 1e-3;           // displacement-increment ratio
  double residual_tolerance = 1e-9;  // relative residual accepted without a further update
  double absolute_floor = 1e-12;
  int max_iterations = 25;
  int max_steps = 200;
  double initial_arc_length = 0.0;       // 0: derive from probe_target
  double probe_target = 0.0;             // probe change aimed at by the first step
  double max_initial_load_increment = 0.0;  // 0: unbounded
  double load_scale = 0.0;               // psi^2 weight of lambda; 0: from the first tangent
  double growth = 1.5;
  double shrink = 0.5;
  int fast_iterations = 4;
  double max_arc_ratio = 8.0;    // cap relative to the initial arc length
  double min_arc_ratio = 1e-10;  // underflow terminates the path
  double max_load = std::numeric_limits<double>::infinity();
  double max_probe = std::numeric_limits<double>::infinity();
  bool reject_bifurcation_jumps = true;  // refuse steps that lose stability without a load reversal
};

struct NewtonResult {
  Eigen::VectorXd state;
  int iterations = 0;
};

/// Solves f(u) = lambda F from `initial`. Throws ConvergenceError with the last iterate.
NewtonResult newton_raphson(const EquilibriumProblem& problem, double lambda,
                            const SolverSettings& settings, Eigen::VectorXd initial);

struct PathRecord {
  int step = 0;
  double lambda = 0.0;
  Eigen::VectorXd state;
  double probe = 0.0;
  int iterations = 0;
};

struct EquilibriumPath {
  std::vector<PathRecord> records;
  bool complete = true;  // false on arc-length underflow or when max_steps ran out
  std::string message;
  double initial_arc_length = 0.0;
};

/// Riks continuation with the normal-plane constraint, starting from u = 0, lambda = 0.
EquilibriumPath riks_trace(const EquilibriumProblem& problem, const SolverSettings& settings);

/// Load factor where |probe| first reaches `threshold` (linear interpolation); NaN if never.
double critical_load_threshold(const EquilibriumPath& path, double threshold);
/// Load factor on the flattest segment of the lambda-|probe| curve; NaN for empty paths.
double critical_load_plateau(const EquilibriumPath& path);

// ---------------------------------------------------------------------------
// Plate drivers

/// Plate equilibrium restricted to the free dofs of the model.
class PlateEquilibrium : public EquilibriumProblem {
 public:
  PlateEquilibrium(const PlateModel& model, const LoadCase& reference,
                   std::optional<Point2> probe = std::nullopt);

  Eigen::Index size() const override { return static_cast<Eigen::Index>(free_.size()); }
  std::pair<Eigen::VectorXd, SparseMatrix> linearize(const Eigen::VectorXd& u) const override;
  Eigen::VectorXd internal_force(const Eigen::VectorXd& u) const override;
  const Eigen::VectorXd& reference_load() const override { return load_; }
  double probe(const Eigen::VectorXd& u) const override;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
  Eigen::VectorXd reduce(const Eigen::VectorXd& full) const;
  SparseMatrix reduce(const SparseMatrix& full) const;
  const PlateModel& model() const { return model_; }

 private:
  const PlateModel& model_;
  std::vector<int> free_;
  std::vector<int> full_to_free_;
  Eigen::VectorXd load_;
  std::vector<std::pair<int, double>> probe_weights_;  // reduced index, basis value
};

/// Linear response to `load` (no von-Karman or imperfection terms). Full-size state.
Eigen::VectorXd linear_bending(const PlateModel& model, const LoadCase& load);

struct PlateBuckling {
  double load_factor = 0.0;
  Eigen::VectorXd mode;       // full size, unit max |w| (positive)
  Eigen::VectorXd prestress;  // linear response to the reference load
};

/// Linearized buckling of the perfect plate under the in-plane part of `reference`.
PlateBuckling plate_linear_buckling(const PlateModel& model, const LoadCase& reference);

}  // namespace vtplate
