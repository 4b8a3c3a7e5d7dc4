#pragma once

#include <functional>
#include <variant>

#include "fxt_mvi/core.hpp"

namespace fxt_mvi {

/// Componentwise soft threshold sgn(x) max(0, |x| - tau). Ties |x_i| = tau
/// map to 0.
Vector prox_l1(const Vector& x, double tau);

/// Euclidean projection onto the closed ball {y : |y - center| <= radius}.
Vector project_ball(const Vector& x, const Vector& center, double radius);

/// Componentwise clamp to [lo, hi].
Vector project_box(const Vector& x, const Vector& lo, const Vector& hi);

inline Vector prox_zero(const Vector& x) { return x; }

/// Brute-force prox of a separable g: per coordinate, golden-section
/// minimisation of tau g_1d(y) + (x_i - y)^2 / 2 on
/// [x_i - 10 tau (1 + |x_i|), x_i + 10 tau (1 + |x_i|)] down to a 1e-10
/// bracket. Independent of the closed forms above. Rounding in g itself
/// limits the accuracy to about sqrt(ulp(g)): fold scale factors into tau
/// (prox of tau*w*|.| is oracle(|.|, x, tau*w)) rather than into g_1d.
Vector prox_oracle_separable(const std::function<double(double)>& g_1d, const Vector& x,
                             double tau);

/// A proximal map of one of the built-in functions g. Usable wherever a
/// ProxMap is expected.
class ProxHandle {
 public:
  struct L1 {
    double weight = 1.0;
  };
  struct Ball {
    Vector center;
    double radius;
  };
  struct Box {
    Vector lower;
    Vector upper;
  };
  struct Zero {};

  /// g = weight * |x|_1
  static ProxHandle l1(double weight = 1.0);
  /// g = indicator of a closed ball
  static ProxHandle ball(Vector center, double radius);
  /// g = indicator of a box
  static ProxHandle box(Vector lower, Vector upper);
  /// g = 0
  static ProxHandle zero();

  /// prox_{tau g}(x)
  Vector operator()(double tau, const Vector& x) const;
  /// g(x); +inf outside the set for indicator kinds.
  double value(const Vector& x) const;

  const char* kind_name() const;
  const std::variant<L1, Ball, Box, Zero>& kind() const noexcept { return kind_; }

  ProxMap as_map() const {
    return [h = *this](double tau, const Vector& x) { return h(tau, x); };
  }
  ScalarFunction as_function() const {
    return [h = *this](const Vector& x) { return h.value(x); };
  }

 private:
  explicit ProxHandle(std::variant<L1, Ball, Box, Zero> k) : kind_(std::move(k)) {}
  std::variant<L1, Ball, Box, Zero> kind_;
};

}  // namespace fxt_mvi
