#include "admmlab/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace admmlab {

double prox_l1(double gamma, double r) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_l1: gamma must be positive");
  const double mag = std::abs(r) - gamma;
  if (mag <= 0.0) return 0.0;
  return r > 0.0 ? mag : -mag;
}

double prox_box(double gamma, double r) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_box: gamma must be positive");
  return std::min(std::max(r, -1.0), 1.0);
}

double SeparableRegularizer::value(double s) const noexcept {
  if (kind_ == Kind::L1) return std::abs(s);
  return (s >= -1.0 && s <= 1.0) ? 0.0 : std::numeric_limits<double>::infinity();
}

std::string to_string(SeparableRegularizer::Kind kind) {
  return kind == SeparableRegularizer::Kind::L1 ? "l1" : "box";
}

double penalty_value(const SeparableRegularizer& reg, const Vector& s) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += reg.value(s[i]);
  return acc;
}

Vector prox_vector(const SeparableRegularizer& reg, double gamma, const Vector& r) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_vector: gamma must be positive");
  Vector out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) out[i] = reg.prox(gamma, r[i]);
  return out;
}

}  // namespace admmlab
