#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "admmlab/rng.hpp"

namespace admmlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Distribution of the unknown signal entries.
///
/// BernoulliGaussian(p0): exact zero with probability p0, otherwise N(0, 1).
/// BinaryPM1: +1 or -1 with probability 1/2 each.
class SignalPrior {
 public:
  enum class Kind { BernoulliGaussian, BinaryPM1 };

  static SignalPrior bernoulli_gaussian(double p0);
  static SignalPrior binary_pm1();

  Kind kind() const noexcept { return kind_; }
  double p0() const noexcept { return p0_; }
  bool is_binary() const noexcept { return kind_ == Kind::BinaryPM1; }

  double sample(RngStream& rng) const;
  /// Population second moment E[X^2].
  double second_moment() const noexcept;

 private:
  SignalPrior(Kind kind, double p0) : kind_(kind), p0_(p0) {}
  Kind kind_;
  double p0_;
};

enum class MatrixEnsemble { GaussianIID, BernoulliPM };

std::string to_string(MatrixEnsemble e);
MatrixEnsemble matrix_ensemble_from_string(const std::string& name);

/// One realization of y = A x + v.
struct ProblemInstance {
  Vector x;
  Matrix A;
  Vector v;
  Vector y;
  int N = 0;
  int M = 0;
  double delta = 0.0;
  double sigma_v2 = 0.0;
};

Vector sample_signal(const SignalPrior& prior, int n, RngStream& rng);

/// Entries have zero mean and variance 1/n (n = column count).
Matrix sample_matrix(MatrixEnsemble ensemble, int m, int n, RngStream& rng);

/// M = round(delta * n). Draws x, then A (row-major order), then v.
ProblemInstance generate_instance(const SignalPrior& prior, MatrixEnsemble ensemble, int n,
                                  double delta, double sigma_v2, RngStream& rng);

/// Same as generate_instance but with an explicit measurement count.
ProblemInstance generate_instance_m(const SignalPrior& prior, MatrixEnsemble ensemble, int n,
                                    int m, double sigma_v2, RngStream& rng);

int measurement_count(int n, double delta);

/// sign(0) is taken as +1.
inline double sign_pm1(double v) noexcept { return v < 0.0 ? -1.0 : 1.0; }

double mse(std::span<const double> s, std::span<const double> x);
double mse(const Vector& s, const Vector& x);

/// Fraction of coordinates where sign(s_n) != x_n. x must be a +-1 vector.
double ser(std::span<const double> s, std::span<const double> x);
double ser(const Vector& s, const Vector& x);

/// P(s) = (1/n) #{ i : values_i < s } evaluated at each grid point.
std::vector<double> empirical_cdf(std::span<const double> values, std::span<const double> grid);

/// True when every entry is exactly +1 or -1 (and the vector is non-empty).
bool is_pm1(const Vector& x);

/// Two-sample Kolmogorov-Smirnov statistic sup_t |F_a(t) - F_b(t)|.
double ks_distance(std::vector<double> a, std::vector<double> b);

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace admmlab
