#include "admmlab/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace admmlab {

namespace {

constexpr Eigen::Index kChunk = 4096;

// Sum of term(i) over [0, n) in fixed-size chunks; the order is independent
// of any threading so repeated searches see identical values.
template <typename Term>
double chunked_mean(Eigen::Index n, Term&& term) {
  double total = 0.0;
  for (Eigen::Index begin = 0; begin < n; begin += kChunk) {
    const Eigen::Index end = std::min(n, begin + kChunk);
    double partial = 0.0;
    for (Eigen::Index i = begin; i < end; ++i) partial += term(i);
    total += partial;
  }
  return n > 0 ? total / static_cast<double>(n) : 0.0;
}

void check_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw NonFiniteObjective(std::string("non-finite objective in ") + where);
}

// Argmin (maximize = false) or argmax of a unimodal function on [lo, hi].
template <typename F>
double ternary(F&& f, double lo, double hi, double tol, bool maximize) {
  while (hi - lo > tol) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double f1 = f(m1);
    const double f2 = f(m2);
    check_finite(f1, "ternary search");
    check_finite(f2, "ternary search");
    const bool keep_left = maximize ? (f1 > f2) : (f1 < f2);
    if (keep_left) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return 0.5 * (lo + hi);
}

Vector draw_gaussian(Eigen::Index n, RngStream& rng) {
  Vector h(n);
  for (Eigen::Index i = 0; i < n; ++i) h[i] = rng.normal();
  return h;
}

bool wants_snapshot(const PredictionConfig& config, int k) {
  if (!config.record_samples) return false;
  if (config.snapshot_iters.empty()) return true;
  return std::find(config.snapshot_iters.begin(), config.snapshot_iters.end(), k) !=
         config.snapshot_iters.end();
}

}  // namespace

std::string to_string(HMode mode) { return mode == HMode::Fixed ? "fixed" : "fresh"; }

HMode h_mode_from_string(const std::string& name) {
  if (name == "fixed") return HMode::Fixed;
  if (name == "fresh") return HMode::Fresh;
  throw std::invalid_argument("unknown h_mode '" + name + "'");
}

void PredictionConfig::validate() const {
  if (particles < 1) throw std::invalid_argument("PredictionConfig: particles must be >= 1");
  if (!(alpha_range.lo > 0.0 && alpha_range.lo < alpha_range.hi)) {
    throw std::invalid_argument("PredictionConfig: alpha range must satisfy 0 < lo < hi");
  }
  if (!(beta_range.lo > 0.0 && beta_range.lo < beta_range.hi)) {
    throw std::invalid_argument("PredictionConfig: beta range must satisfy 0 < lo < hi");
  }
  if (!(search_tol > 0.0)) throw std::invalid_argument("PredictionConfig: search_tol must be > 0");
  if (max_range_widenings < 0) {
    throw std::invalid_argument("PredictionConfig: max_range_widenings must be >= 0");
  }
}

ParticleEnsemble init_ensemble(const SignalPrior& prior, int particles, RngStream& rng) {
  if (particles < 1) throw std::invalid_argument("init_ensemble: particle count must be >= 1");
  ParticleEnsemble e;
  e.x = sample_signal(prior, particles, rng);
  e.s = Vector::Zero(particles);
  e.z = Vector::Zero(particles);
  e.w = Vector::Zero(particles);
  e.k = 0;
  return e;
}

double s_hat(double alpha, double beta, double x, double h, double z, double w, double delta,
             double rho) {
  const double sd = std::sqrt(delta);
  const double weight = beta * sd / alpha;
  return (weight * (x + alpha / sd * h) + rho * (z - w)) / (weight + rho);
}

double j_value(double alpha, double beta, double x, double h, double z, double w, double delta,
               double rho) {
  const double sd = std::sqrt(delta);
  const double s = s_hat(alpha, beta, x, h, z, w, delta, rho);
  const double e = s - x;
  const double q = s - z + w;
  return beta * sd / (2.0 * alpha) * e * e - beta * h * e + 0.5 * rho * q * q;
}

double saddle_objective(double alpha, double beta, const ParticleEnsemble& ensemble,
                        const Vector& h_draws, double delta, double sigma_v2, double rho) {
  if (h_draws.size() != ensemble.size()) {
    throw std::invalid_argument("saddle_objective: h_draws length mismatch");
  }
  const double sd = std::sqrt(delta);
  const double mean_j = chunked_mean(ensemble.size(), [&](Eigen::Index i) {
    return j_value(alpha, beta, ensemble.x[i], h_draws[i], ensemble.z[i], ensemble.w[i], delta,
                   rho);
  });
  return alpha * beta * sd / 2.0 + beta * sigma_v2 * sd / (2.0 * alpha) - 0.5 * beta * beta +
         mean_j;
}

ObjectiveMoments ObjectiveMoments::from(const ParticleEnsemble& ensemble, const Vector& h_draws) {
  if (h_draws.size() != ensemble.size()) {
    throw std::invalid_argument("ObjectiveMoments: h_draws length mismatch");
  }
  const auto d = [&](Eigen::Index i) { return ensemble.x[i] - ensemble.z[i] + ensemble.w[i]; };
  ObjectiveMoments m;
  m.dd = chunked_mean(ensemble.size(), [&](Eigen::Index i) { return d(i) * d(i); });
  m.hh = chunked_mean(ensemble.size(), [&](Eigen::Index i) { return h_draws[i] * h_draws[i]; });
  m.hd = chunked_mean(ensemble.size(), [&](Eigen::Index i) { return h_draws[i] * d(i); });
  return m;
}

double ObjectiveMoments::mean_j(double alpha, double beta, double delta, double rho) const {
  const double c = std::sqrt(delta) / alpha;
  return beta * (rho * c * dd - beta * hh + 2.0 * rho * hd) / (2.0 * (c * beta + rho));
}

double saddle_objective(double alpha, double beta, const ObjectiveMoments& moments, double delta,
                        double sigma_v2, double rho) {
  const double sd = std::sqrt(delta);
  return alpha * beta * sd / 2.0 + beta * sigma_v2 * sd / (2.0 * alpha) - 0.5 * beta * beta +
         moments.mean_j(alpha, beta, delta, rho);
}

SaddlePoint ternary_saddle(const SaddleFunction& f, SearchRange alpha_range,
                           SearchRange beta_range, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("ternary_saddle: tol must be positive");
  const auto inner_argmax = [&](double alpha) {
    return ternary([&](double beta) { return f(alpha, beta); }, beta_range.lo, beta_range.hi, tol,
                   true);
  };
  const auto outer = [&](double alpha) { return f(alpha, inner_argmax(alpha)); };
  SaddlePoint p;
  p.alpha_star = ternary(outer, alpha_range.lo, alpha_range.hi, tol, false);
  p.beta_star = inner_argmax(p.alpha_star);
  p.value = f(p.alpha_star, p.beta_star);
  check_finite(p.value, "saddle value");

  const double margin = 2.0 * tol;
  const bool alpha_edge = p.alpha_star - alpha_range.lo <= margin ||
                          alpha_range.hi - p.alpha_star <= margin;
  const bool beta_edge =
      p.beta_star - beta_range.lo <= margin || beta_range.hi - p.beta_star <= margin;
  if (alpha_edge || beta_edge) {
    throw OptimumAtBoundary(alpha_edge ? "saddle alpha* on search boundary"
                                       : "saddle beta* on search boundary",
                            p);
  }
  return p;
}

SaddlePoint solve_saddle(const ParticleEnsemble& ensemble, const Vector& h_draws, double delta,
                         double sigma_v2, double rho, const PredictionConfig& config) {
  config.validate();
  const ObjectiveMoments moments = ObjectiveMoments::from(ensemble, h_draws);
  const SaddleFunction f = [&](double a, double b) {
    return saddle_objective(a, b, moments, delta, sigma_v2, rho);
  };
  SearchRange ar = config.alpha_range;
  SearchRange br = config.beta_range;
  for (int attempt = 0;; ++attempt) {
    try {
      return ternary_saddle(f, ar, br, config.search_tol);
    } catch (const OptimumAtBoundary& e) {
      if (attempt >= config.max_range_widenings) throw;
      const double margin = 2.0 * config.search_tol;
      const SaddlePoint& p = e.point();
      if (p.alpha_star - ar.lo <= margin) ar.lo /= 2.0;
      if (ar.hi - p.alpha_star <= margin) ar.hi *= 2.0;
      if (p.beta_star - br.lo <= margin) br.lo /= 2.0;
      if (br.hi - p.beta_star <= margin) br.hi *= 2.0;
    }
  }
}

ParticleEnsemble evolve(const ParticleEnsemble& ensemble, const SaddlePoint& saddle,
                        const Vector& h_draws, const SeparableRegularizer& reg, double lambda,
                        double rho, double delta) {
  if (h_draws.size() != ensemble.size()) {
    throw std::invalid_argument("evolve: h_draws length mismatch");
  }
  const double gamma = lambda / rho;
  ParticleEnsemble next;
  next.x = ensemble.x;
  next.s.resize(ensemble.size());
  next.z.resize(ensemble.size());
  next.w.resize(ensemble.size());
  for (Eigen::Index i = 0; i < ensemble.size(); ++i) {
    const double s = s_hat(saddle.alpha_star, saddle.beta_star, ensemble.x[i], h_draws[i],
                           ensemble.z[i], ensemble.w[i], delta, rho);
    const double z = reg.prox(gamma, s + ensemble.w[i]);
    next.s[i] = s;
    next.z[i] = z;
    next.w[i] = ensemble.w[i] + (s - z);
  }
  next.k = ensemble.k + 1;
  return next;
}

double predicted_ser(const ParticleEnsemble& ensemble) {
  if (!is_pm1(ensemble.x)) {
    throw std::invalid_argument("predicted_ser: requires a +-1 prior");
  }
  return ser(ensemble.s, ensemble.x);
}

std::vector<double> predicted_cdf(const ParticleEnsemble& ensemble,
                                  std::span<const double> grid) {
  return empirical_cdf(as_span(ensemble.s), grid);
}

PredictionTrajectory predict_trajectory(const SignalPrior& prior, const SeparableRegularizer& reg,
                                        double lambda, double delta, double sigma_v2, double rho,
                                        int iters, const PredictionConfig& config) {
  config.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("predict_trajectory: lambda must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("predict_trajectory: rho must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("predict_trajectory: delta must be > 0");
  if (!(sigma_v2 >= 0.0)) throw std::invalid_argument("predict_trajectory: sigma_v2 must be >= 0");
  if (iters < 0) throw std::invalid_argument("predict_trajectory: iters must be >= 0");

  RngStream rng(config.seed, kPredictionStream);
  ParticleEnsemble ensemble = init_ensemble(prior, config.particles, rng);
  Vector h = draw_gaussian(ensemble.size(), rng);

  PredictionTrajectory traj;
  traj.particles = config.particles;
  traj.records.reserve(static_cast<std::size_t>(std::max(iters, 0)));
  const bool binary = prior.is_binary();
  for (int it = 0; it < iters; ++it) {
    if (config.h_mode == HMode::Fresh && it > 0) h = draw_gaussian(ensemble.size(), rng);
    const SaddlePoint sp = solve_saddle(ensemble, h, delta, sigma_v2, rho, config);
    ensemble = evolve(ensemble, sp, h, reg, lambda, rho, delta);

    PredictionRecord rec;
    rec.k = ensemble.k;
    rec.alpha_star = sp.alpha_star;
    rec.beta_star = sp.beta_star;
    rec.objective_value = sp.value;
    rec.mse_alpha_raw = sp.alpha_star * sp.alpha_star - sigma_v2;
    rec.mse_alpha = std::max(0.0, rec.mse_alpha_raw);
    rec.mse_ensemble = mse(ensemble.s, ensemble.x);
    rec.ser = binary ? ser(ensemble.s, ensemble.x) : std::numeric_limits<double>::quiet_NaN();
    traj.records.push_back(rec);
    if (wants_snapshot(config, ensemble.k)) traj.snapshots.emplace_back(ensemble.k, ensemble.s);
  }
  return traj;
}

double tune_lambda(const SignalPrior& prior, const SeparableRegularizer& reg, double delta,
                   double sigma_v2, double rho, std::uint64_t seed, const LambdaTuning& tuning) {
  if (!(tuning.lambda_lo > 0.0 && tuning.lambda_lo < tuning.lambda_hi)) {
    throw std::invalid_argument("tune_lambda: need 0 < lambda_lo < lambda_hi");
  }
  PredictionConfig cfg;
  cfg.particles = tuning.particles;
  cfg.seed = splitmix64(seed ^ kLambdaTuningStream);
  const auto final_mse = [&](double log_lambda) {
    const auto traj = predict_trajectory(prior, reg, std::pow(10.0, log_lambda), delta, sigma_v2,
                                         rho, tuning.iters, cfg);
    return traj.records.back().mse_ensemble;
  };
  const double best = ternary(final_mse, std::log10(tuning.lambda_lo),
                              std::log10(tuning.lambda_hi), tuning.log10_tol, false);
  return std::pow(10.0, best);
}

}  // namespace admmlab
