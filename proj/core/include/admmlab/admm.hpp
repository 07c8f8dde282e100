#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "admmlab/model.hpp"
#include "admmlab/regularizer.hpp"

namespace admmlab {

struct AdmmConfig {
  double rho = 0.1;
  double lambda = 1.0;
  int max_iter = 50;
  /// Keep s^(k) snapshots. With snapshot_iters empty every iterate is kept.
  bool record_estimates = false;
  std::vector<int> snapshot_iters;
#ifdef NDEBUG
  bool verify_identity = false;
#else
  bool verify_identity = true;
#endif

  void validate() const;
};

struct AdmmState {
  Vector s;
  Vector z;
  Vector w;
  int k = 0;

  /// z = w = 0 (and s = 0) at k = 0.
  static AdmmState zeros(int n);
};

/// Applies (A^T A + rho I)^{-1}. Factorized once per (A, rho).
class CachedSolver {
 public:
  enum class Path {
    Auto,      // Woodbury when M < N, direct otherwise
    Direct,    // Cholesky of the N x N system
    Woodbury,  // Cholesky of A A^T + rho I (M x M)
  };

  static CachedSolver prepare(const Matrix& A, double rho, Path path = Path::Auto);

  Vector solve(const Vector& b) const;

  Path path() const noexcept { return path_; }
  double rho() const noexcept { return rho_; }
  Eigen::Index rows() const noexcept { return A_.rows(); }
  Eigen::Index cols() const noexcept { return A_.cols(); }

 private:
  CachedSolver(Matrix A, double rho, Path path);

  Matrix A_;
  double rho_;
  Path path_;
  Eigen::LLT<Matrix> llt_;
};

/// One ADMM iteration:
///   s' = (A^T A + rho I)^{-1} (A^T y + rho (z - w))
///   z' = prox_{(lambda/rho) f}(s' + w)
///   w' = w + s' - z'
AdmmState admm_step(const AdmmState& state, const ProblemInstance& instance,
                    const AdmmConfig& config, const SeparableRegularizer& reg,
                    const CachedSolver& solver);

/// Same, with A^T y supplied by the caller (run() computes it once).
AdmmState admm_step(const AdmmState& state, const Vector& aty, const AdmmConfig& config,
                    const SeparableRegularizer& reg, const CachedSolver& solver);

struct IterationRecord {
  int k = 0;
  double mse = 0.0;      // of s^(k)
  double mse_z = 0.0;    // of z^(k)
  double ser = 0.0;      // NaN unless x is +-1
  double ser_z = 0.0;
  double primal_residual = 0.0;  // ||s - z|| / sqrt(N)
  double objective = 0.0;        // (1/2)||y - A z||^2 + lambda f(z)
};

struct Trajectory {
  std::vector<IterationRecord> records;
  std::vector<std::pair<int, Vector>> snapshots;  // (k, s^(k))

  std::size_t size() const noexcept { return records.size(); }
};

/// (1/2)||y - A s||^2 + lambda f(s).
double objective(const ProblemInstance& instance, const SeparableRegularizer& reg, double lambda,
                 const Vector& s);

/// Runs config.max_iter iterations from z = w = 0. No early stopping.
Trajectory run(const ProblemInstance& instance, const AdmmConfig& config,
               const SeparableRegularizer& reg);


}  // namespace admmlab
