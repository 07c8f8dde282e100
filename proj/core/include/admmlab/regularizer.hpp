#pragma once

#include <string>

#include "admmlab/model.hpp"

namespace admmlab {

// Scalar proximity maps. gamma is the penalty scale (gamma * f).
double prox_l1(double gamma, double r);
double prox_box(double gamma, double r);

/// Separable convex penalty f(s) = sum_n f(s_n), exposed through its scalar
/// value and scalar prox. The vector forms below are derived from the scalar
/// ones, so the ADMM solver and the particle process share one map.
class SeparableRegularizer {
 public:
  enum class Kind { L1, BoxIndicator };

  constexpr explicit SeparableRegularizer(Kind kind) noexcept : kind_(kind) {}

  static constexpr SeparableRegularizer l1() noexcept { return SeparableRegularizer(Kind::L1); }
  static constexpr SeparableRegularizer box() noexcept {
    return SeparableRegularizer(Kind::BoxIndicator);
  }

  Kind kind() const noexcept { return kind_; }

  /// f(s); +infinity outside [-1, 1] for the box indicator.
  double value(double s) const noexcept;

  double prox(double gamma, double r) const {
    return kind_ == Kind::L1 ? prox_l1(gamma, r) : prox_box(gamma, r);
  }

 private:
  Kind kind_;
};

std::string to_string(SeparableRegularizer::Kind kind);

/// sum_n f(s_n), without the lambda factor.
double penalty_value(const SeparableRegularizer& reg, const Vector& s);

Vector prox_vector(const SeparableRegularizer& reg, double gamma, const Vector& r);

}  // namespace admmlab
