#include "admmlab/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace admmlab {

void AdmmConfig::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("AdmmConfig: rho must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("AdmmConfig: lambda must be positive");
  if (max_iter < 0) throw std::invalid_argument("AdmmConfig: max_iter must be >= 0");
}

AdmmState AdmmState::zeros(int n) {
  return AdmmState{Vector::Zero(n), Vector::Zero(n), Vector::Zero(n), 0};
}

CachedSolver::CachedSolver(Matrix A, double rho, Path path)
    : A_(std::move(A)), rho_(rho), path_(path) {
  Matrix system;
  if (path_ == Path::Woodbury) {
    system = A_ * A_.transpose();
    system.diagonal().array() += rho_;
  } else {
    system = A_.transpose() * A_;
    system.diagonal().array() += rho_;
  }
  llt_.compute(system);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("CachedSolver: Cholesky factorization failed");
  }
}

CachedSolver CachedSolver::prepare(const Matrix& A, double rho, Path path) {
  if (!(rho > 0.0)) throw std::invalid_argument("CachedSolver: rho must be positive");
  if (!A.allFinite()) throw std::invalid_argument("CachedSolver: non-finite matrix entries");
  if (path == Path::Auto) path = A.rows() < A.cols() ? Path::Woodbury : Path::Direct;
  return CachedSolver(A, rho, path);
}

Vector CachedSolver::solve(const Vector& b) const {
  if (b.size() != A_.cols()) throw std::invalid_argument("CachedSolver: dimension mismatch");
  if (path_ == Path::Direct) return llt_.solve(b);
  // (A^T A + rho I)^{-1} = (1/rho) (I - A^T (A A^T + rho I)^{-1} A)
  const Vector t = llt_.solve(A_ * b);
  return (b - A_.transpose() * t) / rho_;
}

AdmmState admm_step(const AdmmState& state, const Vector& aty, const AdmmConfig& config,
                    const SeparableRegularizer& reg, const CachedSolver& solver) {
  const Eigen::Index n = aty.size();
  if (state.z.size() != n || state.w.size() != n) {
    throw std::invalid_argument("admm_step: state dimension mismatch");
  }
  const double rho = config.rho;
  const double gamma = config.lambda / rho;

  AdmmState next;
  next.s = solver.solve(aty + rho * (state.z - state.w));
  next.z.resize(n);
  next.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    next.z[i] = reg.prox(gamma, next.s[i] + state.w[i]);
    next.w[i] = state.w[i] + (next.s[i] - next.z[i]);
  }
  next.k = state.k + 1;
  return next;
}

AdmmState admm_step(const AdmmState& state, const ProblemInstance& instance,
                    const AdmmConfig& config, const SeparableRegularizer& reg,
                    const CachedSolver& solver) {
  if (instance.A.cols() != state.z.size()) {
    throw std::invalid_argument("admm_step: state does not match instance");
  }
  const Vector aty = instance.A.transpose() * instance.y;
  return admm_step(state, aty, config, reg, solver);
}

double objective(const ProblemInstance& instance, const SeparableRegularizer& reg, double lambda,
                 const Vector& s) {
  const double pen = penalty_value(reg, s);
  if (std::isinf(pen)) return std::numeric_limits<double>::infinity();
  const double fit = 0.5 * (instance.y - instance.A * s).squaredNorm();
  return fit + lambda * pen;
}

namespace {

// s^(k+1) computed through A^T A x + A^T v instead of A^T y.
void check_rewritten_update(const ProblemInstance& inst, const AdmmState& prev,
                            const AdmmState& next, const AdmmConfig& config,
                            const CachedSolver& solver) {
  const Vector rhs = inst.A.transpose() * (inst.A * inst.x) + inst.A.transpose() * inst.v +
                     config.rho * (prev.z - prev.w);
  const Vector alt = solver.solve(rhs);
  const double scale = std::max(1.0, next.s.norm());
  if ((alt - next.s).norm() > 1e-8 * scale) {
    throw std::runtime_error("ADMM: rewritten s-update identity violated");
  }
}

bool wants_snapshot(const AdmmConfig& config, int k) {
  if (!config.record_estimates) return false;
  if (config.snapshot_iters.empty()) return true;
  return std::find(config.snapshot_iters.begin(), config.snapshot_iters.end(), k) !=
         config.snapshot_iters.end();
}

}  // namespace

Trajectory run(const ProblemInstance& instance, const AdmmConfig& config,
               const SeparableRegularizer& reg) {
  config.validate();
  Trajectory traj;
  if (config.max_iter == 0) return traj;

  const CachedSolver solver = CachedSolver::prepare(instance.A, config.rho);
  const Vector aty = instance.A.transpose() * instance.y;
  const bool binary = is_pm1(instance.x);
  const double sqrt_n = std::sqrt(static_cast<double>(instance.N));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  AdmmState state = AdmmState::zeros(instance.N);
  traj.records.reserve(static_cast<std::size_t>(config.max_iter));
  for (int it = 0; it < config.max_iter; ++it) {
    AdmmState next = admm_step(state, aty, config, reg, solver);
    if (config.verify_identity && it == 0) {
      check_rewritten_update(instance, state, next, config, solver);
    }
    IterationRecord rec;
    rec.k = next.k;
    rec.mse = mse(next.s, instance.x);
    rec.mse_z = mse(next.z, instance.x);
    rec.ser = binary ? ser(next.s, instance.x) : nan;
    rec.ser_z = binary ? ser(next.z, instance.x) : nan;
    rec.primal_residual = (next.s - next.z).norm() / sqrt_n;
    rec.objective = objective(instance, reg, config.lambda, next.z);
    traj.records.push_back(rec);
    if (wants_snapshot(config, next.k)) traj.snapshots.emplace_back(next.k, next.s);
    state = std::move(next);
  }
  return traj;
}

}  // namespace admmlab
