#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "admmlab/model.hpp"
#include "admmlab/regularizer.hpp"

namespace admmlab {

/// Monte-Carlo population of the scalar process (X, S_k, Z_k, W_k).
struct ParticleEnsemble {
  Vector x;
  Vector s;
  Vector z;
  Vector w;
  int k = 0;

  Eigen::Index size() const noexcept { return x.size(); }
};

/// X drawn i.i.d. from the prior; S = Z = W = 0; k = 0.
ParticleEnsemble init_ensemble(const SignalPrior& prior, int particles, RngStream& rng);

struct SaddlePoint {
  double alpha_star = 0.0;
  double beta_star = 0.0;
  double value = 0.0;
};

struct SearchRange {
  double lo = 1e-4;
  double hi = 10.0;
};

/// How the Gaussian H of each particle behaves across iterations.
enum class HMode {
  Fixed,  // drawn once per particle, reused every iteration
  Fresh,  // redrawn independently every iteration
};

std::string to_string(HMode mode);
HMode h_mode_from_string(const std::string& name);

struct PredictionConfig {
  int particles = 100000;
  SearchRange alpha_range{};
  SearchRange beta_range{};
  double search_tol = 1e-6;
  std::uint64_t seed = 0;
  HMode h_mode = HMode::Fixed;
  /// Range widenings allowed when the optimum lands on a search boundary.
  int max_range_widenings = 4;
  /// Keep S_k samples for these k (all k when empty and record_samples).
  bool record_samples = false;
  std::vector<int> snapshot_iters;

  void validate() const;
};

class OptimumAtBoundary : public std::runtime_error {
 public:
  OptimumAtBoundary(const std::string& what, SaddlePoint point)
      : std::runtime_error(what), point_(point) {}
  const SaddlePoint& point() const noexcept { return point_; }

 private:
  SaddlePoint point_;
};

class NonFiniteObjective : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimizer over the per-particle error of the scalarized auxiliary problem,
/// written in terms of S: the weighted average of X + (alpha/sqrt(delta)) H
/// (weight beta sqrt(delta)/alpha) and Z - W (weight rho).
double s_hat(double alpha, double beta, double x, double h, double z, double w, double delta,
             double rho);

/// J(alpha, beta) for one particle, evaluated at S = s_hat(...):
///   (beta sqrt(delta) / (2 alpha)) (S - X)^2 - beta H (S - X) + (rho/2)(S - Z + W)^2
double j_value(double alpha, double beta, double x, double h, double z, double w, double delta,
               double rho);

/// Saddle objective
///   alpha beta sqrt(delta)/2 + beta sigma_v2 sqrt(delta)/(2 alpha) - beta^2/2 + mean_p J_p
/// with the particle mean taken directly (chunked, fixed order).
double saddle_objective(double alpha, double beta, const ParticleEnsemble& ensemble,
                        const Vector& h_draws, double delta, double sigma_v2, double rho);

/// Sample moments that determine mean_p J_p exactly. With d = X - Z + W and
/// c = sqrt(delta)/alpha, the per-particle minimum of J is
///   beta (rho c d^2 - beta h^2 + 2 rho h d) / (2 (c beta + rho)),
/// which is linear in d^2, h^2 and h d.
struct ObjectiveMoments {
  double dd = 0.0;
  double hh = 0.0;
  double hd = 0.0;

  static ObjectiveMoments from(const ParticleEnsemble& ensemble, const Vector& h_draws);
  double mean_j(double alpha, double beta, double delta, double rho) const;
};

double saddle_objective(double alpha, double beta, const ObjectiveMoments& moments, double delta,
                        double sigma_v2, double rho);

using SaddleFunction = std::function<double(double alpha, double beta)>;

/// Nested ternary search: outer minimization over alpha of
/// g(alpha) = max_beta f(alpha, beta), inner maximization over beta, both to
/// interval width <= tol.
/// Throws OptimumAtBoundary when alpha* or beta* lies within 2 tol of an
/// endpoint and NonFiniteObjective when f returns inf/NaN.
SaddlePoint ternary_saddle(const SaddleFunction& f, SearchRange alpha_range,
                           SearchRange beta_range, double tol);

/// Saddle point for the current ensemble. Widens the search box (hi * 2,
/// lo / 2 on the side that was hit) up to config.max_range_widenings times.
SaddlePoint solve_saddle(const ParticleEnsemble& ensemble, const Vector& h_draws, double delta,
                         double sigma_v2, double rho, const PredictionConfig& config);

/// S <- s_hat(alpha*, beta*, X, H, Z, W); Z <- prox_{(lambda/rho) f}(S + W);
/// W <- W + S - Z; k <- k + 1.
ParticleEnsemble evolve(const ParticleEnsemble& ensemble, const SaddlePoint& saddle,
                        const Vector& h_draws, const SeparableRegularizer& reg, double lambda,
                        double rho, double delta);

/// Fraction of particles with sign(S) != X. X must be +-1.
double predicted_ser(const ParticleEnsemble& ensemble);

std::vector<double> predicted_cdf(const ParticleEnsemble& ensemble,
                                  std::span<const double> grid);

struct PredictionRecord {
  int k = 0;
  double alpha_star = 0.0;
  double beta_star = 0.0;
  double objective_value = 0.0;
  double mse_alpha = 0.0;      // max(0, alpha*^2 - sigma_v2)
  double mse_alpha_raw = 0.0;  // alpha*^2 - sigma_v2
  double mse_ensemble = 0.0;       // mean (S_k - X)^2
  double ser = 0.0;                // NaN for non-binary priors
};

struct PredictionTrajectory {
  std::vector<PredictionRecord> records;
  std::vector<std::pair<int, Vector>> snapshots;  // (k, S_k samples)
  int particles = 0;

  std::size_t size() const noexcept { return records.size(); }
};

PredictionTrajectory predict_trajectory(const SignalPrior& prior, const SeparableRegularizer& reg,
                                        double lambda, double delta, double sigma_v2, double rho,
                                        int iters, const PredictionConfig& config);

struct LambdaTuning {
  double lambda_lo = 1e-3;
  double lambda_hi = 1.0;
  int iters = 300;
  int particles = 20000;
  double log10_tol = 1e-3;
};

/// lambda minimizing the long-horizon predicted MSE (ternary search over
/// log10 lambda). Stands in for the optimizer-level MSE-optimal choice.
double tune_lambda(const SignalPrior& prior, const SeparableRegularizer& reg, double delta,
                   double sigma_v2, double rho, std::uint64_t seed,
                   const LambdaTuning& tuning = {});

}  // namespace admmlab
