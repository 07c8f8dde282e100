#include "admmlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace admmlab {

SignalPrior SignalPrior::bernoulli_gaussian(double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw std::invalid_argument("BernoulliGaussian prior requires 0 < p0 < 1");
  }
  return SignalPrior(Kind::BernoulliGaussian, p0);
}

SignalPrior SignalPrior::binary_pm1() { return SignalPrior(Kind::BinaryPM1, 0.0); }

double SignalPrior::sample(RngStream& rng) const {
  if (kind_ == Kind::BinaryPM1) return rng.coin() ? 1.0 : -1.0;
  // Draw both variates unconditionally so the stream advances identically.
  const double u = rng.uniform();
  const double g = rng.normal();
  return u < p0_ ? 0.0 : g;
}

double SignalPrior::second_moment() const noexcept {
  return kind_ == Kind::BinaryPM1 ? 1.0 : 1.0 - p0_;
}

std::string to_string(MatrixEnsemble e) {
  return e == MatrixEnsemble::GaussianIID ? "gaussian" : "bernoulli";
}

MatrixEnsemble matrix_ensemble_from_string(const std::string& name) {
  if (name == "gaussian") return MatrixEnsemble::GaussianIID;
  if (name == "bernoulli") return MatrixEnsemble::BernoulliPM;
  throw std::invalid_argument("unknown matrix ensemble '" + name + "'");
}

Vector sample_signal(const SignalPrior& prior, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_signal: n must be >= 1");
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = prior.sample(rng);
  return x;
}

Matrix sample_matrix(MatrixEnsemble ensemble, int m, int n, RngStream& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("sample_matrix: dimensions must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix A(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      A(i, j) = ensemble == MatrixEnsemble::GaussianIID ? scale * rng.normal()
                                                        : (rng.coin() ? scale : -scale);
    }
  }
  return A;
}

int measurement_count(int n, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double m = std::round(delta * n);
  if (delta * n < 1.0 || m < 1.0) throw std::invalid_argument("delta * N must be >= 1");
  return static_cast<int>(m);
}

ProblemInstance generate_instance_m(const SignalPrior& prior, MatrixEnsemble ensemble, int n,
                                    int m, double sigma_v2, RngStream& rng) {
  if (n < 1 || m < 1) throw std::invalid_argument("generate_instance: N and M must be >= 1");
  if (!(sigma_v2 >= 0.0)) throw std::invalid_argument("sigma_v2 must be >= 0");
  ProblemInstance inst;
  inst.N = n;
  inst.M = m;
  inst.delta = static_cast<double>(m) / n;
  inst.sigma_v2 = sigma_v2;
  inst.x = sample_signal(prior, n, rng);
  inst.A = sample_matrix(ensemble, m, n, rng);
  inst.v.resize(m);
  const double sd = std::sqrt(sigma_v2);
  for (int i = 0; i < m; ++i) inst.v[i] = sd * rng.normal();
  inst.y = inst.A * inst.x + inst.v;
  return inst;
}

ProblemInstance generate_instance(const SignalPrior& prior, MatrixEnsemble ensemble, int n,
                                  double delta, double sigma_v2, RngStream& rng) {
  return generate_instance_m(prior, ensemble, n, measurement_count(n, delta), sigma_v2, rng);
}

double mse(std::span<const double> s, std::span<const double> x) {
  if (s.size() != x.size()) throw std::invalid_argument("mse: length mismatch");
  if (s.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s[i] - x[i];
    acc += d * d;
  }
  return acc / static_cast<double>(s.size());
}

double mse(const Vector& s, const Vector& x) { return mse(as_span(s), as_span(x)); }

double ser(std::span<const double> s, std::span<const double> x) {
  if (s.size() != x.size()) throw std::invalid_argument("ser: length mismatch");
  if (s.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (x[i] != 1.0 && x[i] != -1.0) throw std::invalid_argument("ser: reference must be +-1");
    if (sign_pm1(s[i]) != x[i]) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(s.size());
}

double ser(const Vector& s, const Vector& x) { return ser(as_span(s), as_span(x)); }

std::vector<double> empirical_cdf(std::span<const double> values, std::span<const double> grid) {
  if (values.empty()) throw std::invalid_argument("empirical_cdf: empty input");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("empirical_cdf: grid must be strictly increasing");
    }
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), g) - sorted.begin();
    out.push_back(static_cast<double>(below) / n);
  }
  return out;
}

bool is_pm1(const Vector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 1.0 && x[i] != -1.0) return false;
  }
  return x.size() > 0;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

}  // namespace admmlab
